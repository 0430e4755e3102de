#pragma once

#include <cstdint>
#include <future>
#include <thread>
#include <vector>

#include "lhv/rng.hpp"

namespace lhv {

/// Monte Carlo estimate with its standard error of the mean.
struct EstimateResult {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n)
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Welford accumulator, mergeable across workers in a fixed order so results
/// are independent of scheduling.
struct RunningStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / double(count);
    m2 += d * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const std::int64_t total = count + o.count;
    mean += d * double(o.count) / double(total);
    m2 += o.m2 + d * d * double(count) * double(o.count) / double(total);
    count = total;
  }

  double sample_variance() const { return count > 1 ? m2 / double(count - 1) : 0.0; }
};

namespace detail {

/// Contiguous sample ranges per worker; worker w handles [begin, end).
inline std::vector<std::pair<std::int64_t, std::int64_t>> worker_ranges(
    std::int64_t n, int workers) {
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  const std::int64_t base = n / workers;
  const std::int64_t extra = n % workers;
  std::int64_t begin = 0;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t len = base + (w < extra ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  return ranges;
}

template <typename Fn>
std::vector<RunningStats> run_workers(Fn&& per_worker, int workers) {
  std::vector<RunningStats> partials(workers);
  if (workers == 1) {
    partials[0] = per_worker(0);
    return partials;
  }
  std::vector<std::future<RunningStats>> futures;
  futures.reserve(workers);
  for (int w = 0; w < workers; ++w)
    futures.push_back(std::async(std::launch::async, per_worker, w));
  for (int w = 0; w < workers; ++w) partials[w] = futures[w].get();
  return partials;
}

}  // namespace detail

/// Monte Carlo mean of `sample(rng, index)` over `n` draws. Each worker runs
/// its own stream seeded by derive_seed(seed, worker); partial statistics are
/// merged in worker order, so identical (seed, workers) give identical output.
template <typename SampleFn>
EstimateResult parallel_estimate(SampleFn&& sample, std::int64_t n, std::uint64_t seed,
                                 int workers = 1) {
  if (n < 2) throw std::invalid_argument("parallel_estimate: need n_samples >= 2");
  if (workers < 1) throw std::invalid_argument("parallel_estimate: workers >= 1");
  const auto ranges = detail::worker_ranges(n, workers);

  auto per_worker = [&](int w) {
    Rng rng(derive_seed(seed, std::uint64_t(w)));
    RunningStats stats;
    for (std::int64_t i = ranges[w].first; i < ranges[w].second; ++i)
      stats.add(sample(rng, i));
    return stats;
  };

  RunningStats total;
  for (const auto& part : detail::run_workers(per_worker, workers)) total.merge(part);
  return {total.mean, std::sqrt(total.sample_variance() / double(n)), n, seed};
}

/// One outer draw of a nested estimator: the inner mean plus the variance of
/// that inner mean (its squared standard error).
struct NestedSample {
  double value = 0.0;
  double inner_variance = 0.0;
};

/// Nested Monte Carlo: outer samples are themselves inner estimates. The inner
/// uncertainty is propagated by adding the average inner variance to the outer
/// sample variance before forming the standard error.
template <typename SampleFn>
EstimateResult parallel_estimate_nested(SampleFn&& sample, std::int64_t n,
                                        std::uint64_t seed, int workers = 1) {
  if (n < 2) throw std::invalid_argument("parallel_estimate_nested: need n >= 2");
  if (workers < 1) throw std::invalid_argument("parallel_estimate_nested: workers >= 1");
  const auto ranges = detail::worker_ranges(n, workers);

  struct Pair {
    RunningStats outer;
    RunningStats inner;
  };
  std::vector<Pair> partials(workers);
  auto per_worker = [&](int w) {
    Rng rng(derive_seed(seed, std::uint64_t(w)));
    Pair p;
    for (std::int64_t i = ranges[w].first; i < ranges[w].second; ++i) {
      const NestedSample s = sample(rng, i);
      p.outer.add(s.value);
      p.inner.add(s.inner_variance);
    }
    return p;
  };
  if (workers == 1) {
    partials[0] = per_worker(0);
  } else {
    std::vector<std::future<Pair>> futures;
    for (int w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, per_worker, w));
    for (int w = 0; w < workers; ++w) partials[w] = futures[w].get();
  }

  RunningStats outer, inner;
  for (const auto& p : partials) {
    outer.merge(p.outer);
    inner.merge(p.inner);
  }
  const double variance = outer.sample_variance() + inner.mean;
  return {outer.mean, std::sqrt(variance / double(n)), n, seed};
}

/// |x| <= k sigma plus a small absolute floor for double-precision residue.
inline bool within_std_errors(double x, double std_error, double k = 3.0) {
  return std::abs(x) <= k * std_error + tol::stat_floor;
}

inline int default_workers() {
  const unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

}  // namespace lhv
