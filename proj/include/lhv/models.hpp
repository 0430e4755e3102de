#pragma once

#include <algorithm>
#include <concepts>
#include <optional>
#include <utility>

#include "lhv/cartan.hpp"
#include "lhv/estimate.hpp"
#include "lhv/operator_basis.hpp"
#include "lhv/state.hpp"

namespace lhv {

/// A measurement choice: coefficient vector, the context that resolves value
/// assignment for degenerate operators, and the per-context-vector outcome
/// values snapped onto the operator spectrum.
///
/// Snapping rule: operators recognized as unit-spectrum get exact {-1, 0, +1}
/// values; anything else snaps the context diagonal onto the eigensystem
/// eigenvalues. Either way assigned values are exact members of a finite set,
/// so perfectly (anti)correlated settings produce bit-equal outcomes.
class MeasurementSetting {
 public:
  /// `spectrum_hint`, when given, replaces the operator's own eigenvalues as
  /// the snapping grid; a transpose partner shares its source's spectrum
  /// exactly, so hinting makes perfectly correlated outcomes bit-equal.
  static MeasurementSetting make(const CoefficientVector& coefficients,
                                 const OperatorBasis& basis,
                                 std::optional<Context> context = {},
                                 std::optional<RVector> spectrum_hint = {}) {
    if (coefficients.side() != basis.side())
      throw std::invalid_argument("MeasurementSetting: coefficient/basis side mismatch");
    HermitianOperator op = devectorize(coefficients, basis);
    const EigenSystem es = eigensystem(op);
    if (!context) context = Context(es.eigenvectors);
    const double offdiag = context->offdiagonal_residual(op);
    if (offdiag > tol::diagonal)
      throw std::invalid_argument(
          "MeasurementSetting: context does not diagonalize operator, residual " +
          std::to_string(offdiag));

    const int n = op.dim();
    RVector values(n);
    const auto kind = classify_spectrum(es.eigenvalues);
    const RVector& grid = spectrum_hint ? *spectrum_hint : es.eigenvalues;
    for (int i = 0; i < n; ++i) {
      const double raw =
          (context->column(i).adjoint() * op.entries() * context->column(i))(0, 0).real();
      if (kind && !spectrum_hint) {
        values[i] = raw > 0.5 ? 1.0 : (raw < -0.5 ? -1.0 : 0.0);
      } else {
        int best = 0;
        for (int k = 1; k < grid.size(); ++k)
          if (std::abs(grid[k] - raw) < std::abs(grid[best] - raw)) best = k;
        values[i] = grid[best];
      }
    }
    return MeasurementSetting(coefficients, std::move(op), std::move(*context),
                              std::move(values));
  }

  const CoefficientVector& coefficients() const { return coefficients_; }
  const HermitianOperator& op() const { return op_; }
  const Context& context() const { return context_; }
  const RVector& values() const { return values_; }
  Side side() const { return coefficients_.side(); }
  int dim() const { return op_.dim(); }

 private:
  MeasurementSetting(CoefficientVector coefficients, HermitianOperator op,
                     Context context, RVector values)
      : coefficients_(std::move(coefficients)),
        op_(std::move(op)),
        context_(std::move(context)),
        values_(std::move(values)) {}

  CoefficientVector coefficients_;
  HermitianOperator op_;
  Context context_;
  RVector values_;
};

/// Joint spectral probabilities p_ij = <psi| P_i ⊗ Q_j |psi> of two settings,
/// with a fixed inverse-CDF outcome order: lexicographic in (Alice index, Bob
/// index) after sorting each side's context by descending outcome value.
/// Probabilities below 1e-12 are treated as zero.
class JointOutcomeTable {
 public:
  JointOutcomeTable(const MaxEntangledState& state, const MeasurementSetting& alice,
                    const MeasurementSetting& bob) {
    const int n = state.dim();
    if (alice.dim() != n || bob.dim() != n)
      throw std::invalid_argument("JointOutcomeTable: dimension mismatch");
    if (alice.side() != Side::Alice || bob.side() != Side::Bob)
      throw std::invalid_argument("JointOutcomeTable: sides must be Alice, Bob");

    const auto order_a = descending_order(alice.values());
    const auto order_b = descending_order(bob.values());
    const CVector& psi = state.vector();

    cumulative_.reserve(static_cast<std::size_t>(n) * n);
    values_.reserve(static_cast<std::size_t>(n) * n);
    double total = 0.0;
    for (int i : order_a)
      for (int j : order_b) {
        const CVector u = alice.context().column(i);
        const CVector q = bob.context().column(j);
        Complex amp(0, 0);
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t)
            amp += std::conj(u[s]) * std::conj(q[t]) * psi[s * n + t];
        double p = std::norm(amp);
        if (p < 1e-12) p = 0.0;
        total += p;
        cumulative_.push_back(total);
        values_.emplace_back(alice.values()[i], bob.values()[j]);
      }
    if (std::abs(total - 1.0) > tol::vanishing)
      throw std::runtime_error("JointOutcomeTable: probabilities sum to " +
                               std::to_string(total));
    total_ = total;
  }

  /// Inverse-CDF draw: the first outcome whose cumulative weight exceeds
  /// u * total. Deterministic in u; u = 0 selects the first outcome with
  /// positive probability.
  std::pair<double, double> outcome(double u) const {
    if (u < 0.0 || u >= 1.0)
      throw std::invalid_argument("JointOutcomeTable: u must lie in [0, 1)");
    const double target = u * total_;
    for (std::size_t k = 0; k < cumulative_.size(); ++k)
      if (cumulative_[k] > target) return values_[k];
    return values_.back();
  }

  double probability(std::size_t k) const {
    return cumulative_[k] - (k == 0 ? 0.0 : cumulative_[k - 1]);
  }
  std::size_t size() const { return values_.size(); }
  const std::pair<double, double>& value_pair(std::size_t k) const { return values_[k]; }

  double expected_product() const {
    double e = 0.0;
    for (std::size_t k = 0; k < size(); ++k)
      e += probability(k) * values_[k].first * values_[k].second;
    return e;
  }

 private:
  static std::vector<int> descending_order(const RVector& values) {
    std::vector<int> order(values.size());
    for (int i = 0; i < values.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });
    return order;
  }

  std::vector<double> cumulative_;
  std::vector<std::pair<double, double>> values_;
  double total_ = 0.0;
};

/// Deterministic value assignment reproducing the quantum statistics: the
/// outcome pair is selected from the joint spectral distribution by inverse
/// CDF on a single uniform u in [0, 1).
inline std::pair<double, double> qm_faithful_assign(const MaxEntangledState& state,
                                                    const MeasurementSetting& alice,
                                                    const MeasurementSetting& bob,
                                                    double u) {
  return JointOutcomeTable(state, alice, bob).outcome(u);
}

/// Alice-convention Bloch vector of a 2x2 operator expansion: the coefficient
/// slots map to (n_x, n_y, n_z) with the antisymmetric slot carrying -n_y.
inline Eigen::Vector3d bloch_vector(const CoefficientVector& c) {
  if (c.dim() != 2)
    throw std::invalid_argument("bloch_vector: defined for N = 2 only");
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return {c[2] * inv_sqrt2, -c[3] * inv_sqrt2, (c[0] - c[1]) / 2.0};
}

/// Polarization pair carried by the coarse hidden variable of the
/// Leggett-style model; the partner particle is anticorrelated (v = -u).
struct LeggettTau {
  Eigen::Vector3d u;
  Eigen::Vector3d v;
};

/// Leggett-style intermediate average for Alice: the overlap of the setting
/// direction with the definite polarization u.
inline double leggett_f(const Eigen::Vector3d& a_bloch, const LeggettTau& tau) {
  if (std::abs(a_bloch.norm() - 1.0) > tol::spectrum)
    throw std::invalid_argument("leggett_f: setting direction must be unit length");
  if (std::abs(tau.u.norm() - 1.0) > tol::spectrum)
    throw std::invalid_argument("leggett_f: polarization must be unit length");
  return tau.u.dot(a_bloch);
}

/// Bob-side companion: overlap with the partner polarization v.
inline double leggett_g(const Eigen::Vector3d& b_bloch, const LeggettTau& tau) {
  if (std::abs(b_bloch.norm() - 1.0) > tol::spectrum)
    throw std::invalid_argument("leggett_g: setting direction must be unit length");
  if (std::abs(tau.v.norm() - 1.0) > tol::spectrum)
    throw std::invalid_argument("leggett_g: polarization must be unit length");
  return tau.v.dot(b_bloch);
}

/// QM-faithful deterministic nonlocal model (positive control). The hidden
/// variable is a single uniform u; the crypto-nonlocal split is trivial (tau
/// is one point, mu = u), so the intermediate averages are the quantum local
/// averages Tr/N. Construct with analytic = false to force estimators down
/// the nested mu-sampling path.
class QmFaithfulModel {
 public:
  struct Tau {};
  using Mu = double;
  struct Lambda {
    Mu mu;
    Tau tau;
  };

  explicit QmFaithfulModel(MaxEntangledState state, bool analytic = true)
      : state_(std::move(state)), analytic_(analytic) {}

  const MaxEntangledState& state() const { return state_; }

  Lambda sample_lambda(const MeasurementSetting&, const MeasurementSetting&,
                       Rng& rng) const {
    return {rng.uniform(), {}};
  }
  Tau sample_tau(const MeasurementSetting&, const MeasurementSetting&, Rng&) const {
    return {};
  }
  Mu sample_mu(const MeasurementSetting&, const MeasurementSetting&, const Tau&,
               Rng& rng) const {
    return rng.uniform();
  }

  std::pair<double, double> assign(const MeasurementSetting& alice,
                                   const MeasurementSetting& bob,
                                   const Lambda& lambda) const {
    return qm_faithful_assign(state_, alice, bob, lambda.mu);
  }

  std::pair<double, double> assign_outcome(const MeasurementSetting& alice,
                                           const MeasurementSetting& bob, Mu mu,
                                           const Tau&) const {
    return qm_faithful_assign(state_, alice, bob, mu);
  }

  bool analytic_intermediates() const { return analytic_; }

  double intermediate_f(const MeasurementSetting& alice, const Tau&) const {
    return local_average(state_, alice.op());
  }
  double intermediate_g(const MeasurementSetting& bob, const Tau&) const {
    return local_average(state_, bob.op());
  }

 private:
  MaxEntangledState state_;
  bool analytic_;
};

/// Leggett-style model (negative control): each pair carries definite
/// anticorrelated polarizations (u, -u) drawn uniformly from the sphere, and
/// the intermediate averages are the polarization overlaps. The model is
/// defined at the intermediate level only; no mu-level outcome model exists.
class LeggettModel {
 public:
  using Tau = LeggettTau;

  explicit LeggettModel(MaxEntangledState state) : state_(std::move(state)) {
    if (state_.dim() != 2)
      throw std::invalid_argument("LeggettModel: defined for N = 2 only");
  }

  const MaxEntangledState& state() const { return state_; }

  Tau sample_tau(const MeasurementSetting&, const MeasurementSetting&,
                 Rng& rng) const {
    const Eigen::Vector3d u = rng.unit_sphere();
    return {u, -u};
  }

  bool analytic_intermediates() const { return true; }

  double intermediate_f(const MeasurementSetting& alice, const Tau& tau) const {
    return leggett_f(bloch_vector(alice.coefficients()), tau);
  }
  double intermediate_g(const MeasurementSetting& bob, const Tau& tau) const {
    return leggett_g(bloch_vector(bob.coefficients()), tau);
  }

 private:
  MaxEntangledState state_;
};

/// Crypto-nonlocal contract: a tau sampler plus intermediate averages f, g.
/// Samplers receive both settings, so distributions may depend on them; the
/// shipped models ignore the arguments.
template <typename M>
concept CryptoNonlocalModel = requires(const M& m, Rng& rng, const MeasurementSetting& s,
                                       const typename M::Tau& tau) {
  typename M::Tau;
  { m.sample_tau(s, s, rng) } -> std::same_as<typename M::Tau>;
  { m.analytic_intermediates() } -> std::convertible_to<bool>;
  { m.intermediate_f(s, tau) } -> std::convertible_to<double>;
  { m.intermediate_g(s, tau) } -> std::convertible_to<double>;
};

/// Crypto-nonlocal model with an explicit mu level underneath the
/// intermediate averages.
template <typename M>
concept MuLevelModel = CryptoNonlocalModel<M> &&
    requires(const M& m, Rng& rng, const MeasurementSetting& s,
             const typename M::Tau& tau) {
      { m.sample_mu(s, s, tau, rng) };
      {
        m.assign_outcome(s, s, m.sample_mu(s, s, tau, rng), tau)
      } -> std::convertible_to<std::pair<double, double>>;
    };

/// Full hidden-variable contract: lambda sampler plus deterministic value
/// assignment.
template <typename M>
concept HiddenVariableModel = requires(const M& m, Rng& rng, const MeasurementSetting& s,
                                       const typename M::Lambda& lambda) {
  typename M::Lambda;
  { m.sample_lambda(s, s, rng) } -> std::same_as<typename M::Lambda>;
  { m.assign(s, s, lambda) } -> std::convertible_to<std::pair<double, double>>;
};

static_assert(CryptoNonlocalModel<QmFaithfulModel>);
static_assert(MuLevelModel<QmFaithfulModel>);
static_assert(HiddenVariableModel<QmFaithfulModel>);
static_assert(CryptoNonlocalModel<LeggettModel>);
static_assert(!MuLevelModel<LeggettModel>);

/// Monte Carlo estimate of E_mu[value_A] at fixed tau. Models without a mu
/// level are degenerate at this stage: every draw repeats the intermediate
/// average itself, so the estimate is exact with zero standard error.
template <CryptoNonlocalModel M>
EstimateResult estimate_intermediate(const M& model, const MeasurementSetting& alice,
                                     const MeasurementSetting& bob,
                                     const typename M::Tau& tau, std::int64_t n_samples,
                                     std::uint64_t seed, int workers = 1) {
  if (n_samples < 2)
    throw std::invalid_argument("estimate_intermediate: need n_samples >= 2");
  if constexpr (MuLevelModel<M>) {
    return parallel_estimate(
        [&](Rng& rng, std::int64_t) {
          const auto mu = model.sample_mu(alice, bob, tau, rng);
          return model.assign_outcome(alice, bob, mu, tau).first;
        },
        n_samples, seed, workers);
  } else {
    return {model.intermediate_f(alice, tau), 0.0, n_samples, seed};
  }
}

struct FullAverages {
  EstimateResult value_a;
  EstimateResult value_b;
  EstimateResult product;
};

/// Monte Carlo means of A, B and AB over lambda.
template <HiddenVariableModel M>
FullAverages estimate_full_average(const M& model, const MeasurementSetting& alice,
                                   const MeasurementSetting& bob, std::int64_t n_samples,
                                   std::uint64_t seed, int workers = 1) {
  if (n_samples < 2)
    throw std::invalid_argument("estimate_full_average: need n_samples >= 2");
  if (workers < 1) throw std::invalid_argument("estimate_full_average: workers >= 1");
  const auto ranges = detail::worker_ranges(n_samples, workers);

  struct Triple {
    RunningStats a, b, ab;
  };
  auto per_worker = [&](int w) {
    Rng rng(derive_seed(seed, std::uint64_t(w)));
    Triple t;
    for (std::int64_t i = ranges[w].first; i < ranges[w].second; ++i) {
      const auto lambda = model.sample_lambda(alice, bob, rng);
      const auto [va, vb] = model.assign(alice, bob, lambda);
      t.a.add(va);
      t.b.add(vb);
      t.ab.add(va * vb);
    }
    return t;
  };

  std::vector<Triple> partials(workers);
  if (workers == 1) {
    partials[0] = per_worker(0);
  } else {
    std::vector<std::future<Triple>> futures;
    for (int w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, per_worker, w));
    for (int w = 0; w < workers; ++w) partials[w] = futures[w].get();
  }

  Triple total;
  for (const auto& p : partials) {
    total.a.merge(p.a);
    total.b.merge(p.b);
    total.ab.merge(p.ab);
  }
  auto finish = [&](const RunningStats& s) {
    return EstimateResult{s.mean, std::sqrt(s.sample_variance() / double(n_samples)),
                          n_samples, seed};
  };
  return {finish(total.a), finish(total.b), finish(total.ab)};
}

/// Bob-side setting perfectly correlated with an Alice setting: same
/// coefficients on the partner basis, context conjugated into Bob coordinates
/// so the joint distribution concentrates on equal outcome clusters.
inline MeasurementSetting transpose_setting(const MeasurementSetting& alice,
                                            const SchmidtBasis& schmidt,
                                            const OperatorBasis& bob_basis,
                                            bool anticorrelated = false) {
  if (alice.side() != Side::Alice)
    throw std::invalid_argument("transpose_setting: input must be an Alice setting");
  // Context vectors q_i = W conj(V† u_i): the transposed operator's eigenbasis.
  const Matrix coords = schmidt.alice().adjoint() * alice.context().basis();
  Context bob_context(Matrix(schmidt.bob() * coords.conjugate()));
  CoefficientVector coeffs = alice.coefficients().with_side(Side::Bob);
  RVector hint = alice.values();
  if (anticorrelated) {
    coeffs = coeffs.negated();
    hint = -hint;
  }
  return MeasurementSetting::make(coeffs, bob_basis, std::move(bob_context),
                                  std::move(hint));
}

}  // namespace lhv
