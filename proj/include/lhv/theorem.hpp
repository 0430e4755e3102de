#pragma once

#include <numbers>

#include "lhv/curve.hpp"
#include "lhv/models.hpp"

namespace lhv {

/// Per-step bound (4 |a|^2 / N) sin^2(pi / 2n) on the averaged intermediate
/// difference of adjacent partition settings.
inline double per_step_bound(int n, double norm_a_sq, int dim) {
  if (n < 1 || dim < 2 || !(norm_a_sq > 0))
    throw std::invalid_argument("per_step_bound: need n >= 1, dim >= 2, |a|^2 > 0");
  const double s = std::sin(std::numbers::pi / (2.0 * n));
  return 4.0 * norm_a_sq / double(dim) * s * s;
}

/// Chained bound over the n steps of the partition: n times the per-step bound.
inline double chain_bound(int n, double norm_a_sq, int dim) {
  return double(n) * per_step_bound(n, norm_a_sq, dim);
}

/// Bound on the integrated |f|: half the chain bound by skew symmetry. Tends
/// to zero as n grows (asymptotically pi^2 |a|^2 / (2 n N)).
inline double final_bound(int n, double norm_a_sq, int dim) {
  return chain_bound(n, norm_a_sq, dim) / 2.0;
}

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

/// Three-way statistical decision: an estimate only fails a bound when it
/// exceeds it by more than three standard errors, and only passes when the
/// whole three-sigma interval sits below the bound.
inline Verdict statistical_verdict(double mean, double std_error, double bound) {
  if (mean - 3.0 * std_error > bound + tol::stat_floor) return Verdict::Fail;
  if (mean + 3.0 * std_error <= bound + tol::stat_floor) return Verdict::Pass;
  return Verdict::Inconclusive;
}

struct StepReport {
  int j = 0;
  double theta = 0.0;
  EstimateResult lhs;  // E_tau |f(a_j) - g(a_{j+1})|
  double rhs = 0.0;    // per-step bound
  bool pass = false;   // lhs.mean - 3 std_error <= rhs
  Verdict verdict = Verdict::Inconclusive;
};

struct TheoremReport {
  int n = 0;
  std::vector<StepReport> steps;
  EstimateResult final_lhs;  // E_tau |f(a)|
  double final_rhs = 0.0;
  bool violated = false;  // final_lhs.mean - 3 std_error > final_rhs
  Verdict final_verdict = Verdict::Inconclusive;
};

namespace detail {

/// E_mu of the Bob value at fixed tau (the g-side analogue of
/// estimate_intermediate).
template <MuLevelModel M>
EstimateResult estimate_intermediate_b(const M& model, const MeasurementSetting& alice,
                                       const MeasurementSetting& bob,
                                       const typename M::Tau& tau,
                                       std::int64_t n_samples, std::uint64_t seed) {
  return parallel_estimate(
      [&](Rng& rng, std::int64_t) {
        const auto mu = model.sample_mu(alice, bob, tau, rng);
        return model.assign_outcome(alice, bob, mu, tau).second;
      },
      n_samples, seed, 1);
}

/// Stream indices for nested inner seeds, kept clear of the worker indices
/// that the outer estimator derives from the same master seed.
inline std::uint64_t inner_stream(std::int64_t outer_index, int which) {
  return 1024 + 2 * std::uint64_t(outer_index) + std::uint64_t(which);
}

/// E_tau | f(alice, tau) - g(bob, tau) |, evaluated analytically per tau
/// sample when the model provides intermediates, else by nested mu-sampling
/// with the documented variance propagation.
template <CryptoNonlocalModel M>
EstimateResult estimate_abs_fg_difference(const M& model, const MeasurementSetting& alice,
                                          const MeasurementSetting& bob,
                                          std::int64_t n_tau, std::int64_t n_mu,
                                          std::uint64_t seed, int workers) {
  if constexpr (MuLevelModel<M>) {
    if (!model.analytic_intermediates())
      return parallel_estimate_nested(
          [&](Rng& rng, std::int64_t i) {
            const auto tau = model.sample_tau(alice, bob, rng);
            const auto f = estimate_intermediate(model, alice, bob, tau, n_mu,
                                                 derive_seed(seed, inner_stream(i, 0)));
            const auto g = estimate_intermediate_b(model, alice, bob, tau, n_mu,
                                                   derive_seed(seed, inner_stream(i, 1)));
            return NestedSample{std::abs(f.mean - g.mean),
                                f.std_error * f.std_error + g.std_error * g.std_error};
          },
          n_tau, seed, workers);
  }
  return parallel_estimate(
      [&](Rng& rng, std::int64_t) {
        const auto tau = model.sample_tau(alice, bob, rng);
        return std::abs(model.intermediate_f(alice, tau) -
                        model.intermediate_g(bob, tau));
      },
      n_tau, seed, workers);
}

/// E_tau | f(alice, tau) |, analytic or nested as above.
template <CryptoNonlocalModel M>
EstimateResult estimate_abs_f(const M& model, const MeasurementSetting& alice,
                              const MeasurementSetting& bob, std::int64_t n_tau,
                              std::int64_t n_mu, std::uint64_t seed, int workers) {
  if constexpr (MuLevelModel<M>) {
    if (!model.analytic_intermediates())
      return parallel_estimate_nested(
          [&](Rng& rng, std::int64_t i) {
            const auto tau = model.sample_tau(alice, bob, rng);
            const auto f = estimate_intermediate(model, alice, bob, tau, n_mu,
                                                 derive_seed(seed, inner_stream(i, 0)));
            return NestedSample{std::abs(f.mean), f.std_error * f.std_error};
          },
          n_tau, seed, workers);
  }
  return parallel_estimate(
      [&](Rng& rng, std::int64_t) {
        const auto tau = model.sample_tau(alice, bob, rng);
        return std::abs(model.intermediate_f(alice, tau));
      },
      n_tau, seed, workers);
}

template <CryptoNonlocalModel M>
StepReport verify_step_impl(const M& model, const MaxEntangledState& state,
                            const OperatorBasis& basis_a, const OperatorBasis& basis_b,
                            const CoefficientVector& a_j, const CoefficientVector& a_j1,
                            int n, std::int64_t n_tau, std::int64_t n_mu,
                            std::uint64_t seed, int workers, int j, double theta) {
  const auto alice = MeasurementSetting::make(a_j.with_side(Side::Alice), basis_a);
  const auto bob = MeasurementSetting::make(a_j1.with_side(Side::Bob), basis_b);
  if (!classify_spectrum(alice.op()) || !classify_spectrum(bob.op()))
    throw std::invalid_argument("verify_step: settings must have unit spectrum");

  StepReport report;
  report.j = j;
  report.theta = theta;
  report.lhs =
      estimate_abs_fg_difference(model, alice, bob, n_tau, n_mu, seed, workers);
  report.rhs = per_step_bound(n, a_j.squared_norm(), state.dim());
  report.verdict = statistical_verdict(report.lhs.mean, report.lhs.std_error, report.rhs);
  report.pass = report.verdict != Verdict::Fail;
  return report;
}

}  // namespace detail

/// Checks one link of the chained inequality: the tau-averaged absolute
/// difference of intermediate averages at adjacent settings against the
/// per-step bound for an n-point partition.
template <CryptoNonlocalModel M>
StepReport verify_step(const M& model, const MaxEntangledState& state,
                       const CoefficientVector& a_j, const CoefficientVector& a_j1,
                       int n, std::int64_t n_tau, std::int64_t n_mu, std::uint64_t seed,
                       int workers = 1) {
  const auto basis_a = build_basis(state.schmidt(), Side::Alice);
  const auto basis_b = build_basis(state.schmidt(), Side::Bob);
  return detail::verify_step_impl(model, state, basis_a, basis_b, a_j, a_j1, n, n_tau,
                                  n_mu, seed, workers, 0, 0.0);
}

/// Full chained verification for a unit-spectrum setting a: builds the curve
/// partition, checks every step bound, and tests the integrated |f| against
/// the final bound. `violated` is a conclusive three-sigma exclusion.
template <CryptoNonlocalModel M>
TheoremReport verify_theorem(const M& model, const MaxEntangledState& state,
                             const CoefficientVector& a, int n, std::int64_t n_tau,
                             std::int64_t n_mu, std::uint64_t seed, int workers = 1) {
  const auto basis_a = build_basis(state.schmidt(), Side::Alice);
  const auto basis_b = build_basis(state.schmidt(), Side::Bob);
  const HermitianOperator op = devectorize(a, basis_a);
  if (!classify_spectrum(op))
    throw std::invalid_argument("verify_theorem: setting must have unit spectrum");

  const auto spec = make_curve_spec(a, pauli_frame(op));
  const auto points = partition(spec, basis_a, n);

  TheoremReport report;
  report.n = n;
  report.steps.reserve(n);
  for (int j = 0; j < n; ++j)
    report.steps.push_back(detail::verify_step_impl(
        model, state, basis_a, basis_b, points[j], points[j + 1], n, n_tau, n_mu,
        derive_seed(seed, std::uint64_t(j) + 1), workers, j,
        double(j) * std::numbers::pi / n));

  const auto alice = MeasurementSetting::make(a, basis_a);
  const auto bob = MeasurementSetting::make(a.with_side(Side::Bob), basis_b);
  report.final_lhs = detail::estimate_abs_f(model, alice, bob, n_tau, n_mu,
                                            derive_seed(seed, 0), workers);
  report.final_rhs = final_bound(n, a.squared_norm(), state.dim());
  report.final_verdict =
      statistical_verdict(report.final_lhs.mean, report.final_lhs.std_error,
                          report.final_rhs);
  report.violated = report.final_verdict == Verdict::Fail;
  return report;
}

struct SkewSymmetryReport {
  EstimateResult residual_fg;       // E_tau |f(a) - g(a)|
  EstimateResult residual_antisym;  // E_tau |f(-a) + f(a)|
  bool pass = false;
};

/// QM-consistency probes behind the chained argument: perfectly correlated
/// settings force f = g, and the sign flip a -> -a forces f(-a) = -f(a).
template <CryptoNonlocalModel M>
SkewSymmetryReport skew_symmetry_check(const M& model, const MaxEntangledState& state,
                                       const CoefficientVector& a, std::int64_t n_tau,
                                       std::int64_t n_mu, std::uint64_t seed,
                                       int workers = 1) {
  const auto basis_a = build_basis(state.schmidt(), Side::Alice);
  const auto basis_b = build_basis(state.schmidt(), Side::Bob);
  const HermitianOperator op = devectorize(a, basis_a);
  if (std::abs(op.trace()) / state.dim() > tol::vanishing)
    throw std::invalid_argument("skew_symmetry_check: setting must be traceless");

  const auto alice = MeasurementSetting::make(a, basis_a);
  const auto bob = MeasurementSetting::make(a.with_side(Side::Bob), basis_b);
  const auto alice_neg = MeasurementSetting::make(a.negated(), basis_a);

  SkewSymmetryReport report;
  report.residual_fg = detail::estimate_abs_fg_difference(model, alice, bob, n_tau, n_mu,
                                                          derive_seed(seed, 1), workers);

  if constexpr (MuLevelModel<M>) {
    if (!model.analytic_intermediates()) {
      report.residual_antisym = parallel_estimate_nested(
          [&](Rng& rng, std::int64_t i) {
            const auto tau = model.sample_tau(alice, bob, rng);
            const auto f_neg =
                estimate_intermediate(model, alice_neg, bob, tau, n_mu,
                                      derive_seed(seed, detail::inner_stream(i, 0)));
            const auto f_pos =
                estimate_intermediate(model, alice, bob, tau, n_mu,
                                      derive_seed(seed, detail::inner_stream(i, 1)));
            return NestedSample{
                std::abs(f_neg.mean + f_pos.mean),
                f_neg.std_error * f_neg.std_error + f_pos.std_error * f_pos.std_error};
          },
          n_tau, derive_seed(seed, 2), workers);
      report.pass = within_std_errors(report.residual_fg.mean,
                                      report.residual_fg.std_error) &&
                    within_std_errors(report.residual_antisym.mean,
                                      report.residual_antisym.std_error);
      return report;
    }
  }
  report.residual_antisym = parallel_estimate(
      [&](Rng& rng, std::int64_t) {
        const auto tau = model.sample_tau(alice, bob, rng);
        return std::abs(model.intermediate_f(alice_neg, tau) +
                        model.intermediate_f(alice, tau));
      },
      n_tau, derive_seed(seed, 2), workers);
  report.pass =
      within_std_errors(report.residual_fg.mean, report.residual_fg.std_error) &&
      within_std_errors(report.residual_antisym.mean, report.residual_antisym.std_error);
  return report;
}

struct OmegaReduction {
  double alpha0 = 0.0;
  std::vector<std::pair<double, CoefficientVector>> terms;
};

/// Cartan split expressed back in coefficient space: a = alpha0 * vec(I) +
/// sum_j alpha_j * a_j with every a_j a unit-spectrum coefficient vector.
/// With the theorem forcing f(a_j) = 0, the intermediate average of any
/// observable collapses to its quantum local average.
inline OmegaReduction reduce_to_omega(const CoefficientVector& a,
                                      const OperatorBasis& basis,
                                      std::optional<Context> context = {}) {
  const auto dec = cartan_decompose(devectorize(a, basis), std::move(context));
  OmegaReduction out;
  out.alpha0 = dec.alpha0;
  out.terms.reserve(dec.terms.size());
  for (const auto& t : dec.terms)
    out.terms.emplace_back(t.alpha, vectorize(t.component, basis));
  return out;
}

}  // namespace lhv
