#pragma once

#include "lhv/operator_basis.hpp"
#include "lhv/schmidt.hpp"

namespace lhv {

/// Maximally entangled state (1/sqrt(N)) sum_j |v_j> ⊗ |w_j>, stored as an
/// explicit N^2 amplitude vector so closed-form averages can be checked
/// against dense contractions that do not assume them.
class MaxEntangledState {
 public:
  explicit MaxEntangledState(SchmidtBasis schmidt) : schmidt_(std::move(schmidt)) {
    const int n = schmidt_.dim();
    vector_ = CVector::Zero(static_cast<Eigen::Index>(n) * n);
    const double amp = 1.0 / std::sqrt(double(n));
    for (int j = 0; j < n; ++j) {
      const CVector v = schmidt_.alice_vector(j);
      const CVector w = schmidt_.bob_vector(j);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) vector_[s * n + t] += amp * v[s] * w[t];
    }
    if (std::abs(vector_.norm() - 1.0) > tol::orthonormal)
      throw std::runtime_error("MaxEntangledState: state vector not normalized");
    for (Side side : {Side::Alice, Side::Bob}) {
      const Matrix rho = reduced_density(side);
      const double dev =
          (rho - Matrix::Identity(n, n) / double(n)).cwiseAbs().maxCoeff();
      if (dev > tol::reconstruct)
        throw std::runtime_error("MaxEntangledState: reduced density not I/N");
    }
  }

  int dim() const { return schmidt_.dim(); }
  const SchmidtBasis& schmidt() const { return schmidt_; }
  const CVector& vector() const { return vector_; }
  double amplitude() const { return 1.0 / std::sqrt(double(dim())); }

  /// Partial trace over the complementary subsystem.
  Matrix reduced_density(Side side) const {
    const int n = dim();
    Matrix rho = Matrix::Zero(n, n);
    if (side == Side::Alice) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            rho(i, j) += vector_[i * n + k] * std::conj(vector_[j * n + k]);
    } else {
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i)
            rho(k, l) += vector_[i * n + k] * std::conj(vector_[i * n + l]);
    }
    return rho;
  }

 private:
  SchmidtBasis schmidt_;
  CVector vector_;
};

inline MaxEntangledState make_state(SchmidtBasis schmidt) {
  return MaxEntangledState(std::move(schmidt));
}

/// <psi| A(a) ⊗ B(b) |psi> = a·b / N for coefficient vectors on the paired
/// operator bases.
inline double joint_average(const MaxEntangledState& state, const CoefficientVector& a,
                            const CoefficientVector& b) {
  if (a.side() != Side::Alice || b.side() != Side::Bob)
    throw std::invalid_argument("joint_average: expected Alice and Bob coefficients");
  if (a.dim() != state.dim() || b.dim() != state.dim())
    throw std::invalid_argument("joint_average: dimension mismatch");
  return a.values().dot(b.values()) / double(state.dim());
}

/// Local expectation value of a single-side operator: Tr(op) / N.
inline double local_average(const MaxEntangledState& state, const HermitianOperator& op) {
  if (op.dim() != state.dim())
    throw std::invalid_argument("local_average: dimension mismatch");
  return op.trace() / double(state.dim());
}

/// Pearson correlation of two observables with vanishing local averages:
/// the cosine of the angle between their coefficient vectors.
inline double pearson(const MaxEntangledState& state, const CoefficientVector& a,
                      const CoefficientVector& b) {
  if (a.side() != Side::Alice || b.side() != Side::Bob)
    throw std::invalid_argument("pearson: expected Alice and Bob coefficients");
  if (a.dim() != state.dim() || b.dim() != state.dim())
    throw std::invalid_argument("pearson: dimension mismatch");
  const double n = double(state.dim());
  if (std::abs(a.operator_trace()) / n > tol::vanishing ||
      std::abs(b.operator_trace()) / n > tol::vanishing)
    throw std::invalid_argument("pearson: local averages must vanish");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("pearson: zero-norm coefficient vector");
  return a.values().dot(b.values()) / (na * nb);
}

/// Dense-contraction expectation <psi| X ⊗ Y |psi>; the independent route
/// used to validate the closed forms.
inline double dense_joint_expectation(const MaxEntangledState& state,
                                      const HermitianOperator& x,
                                      const HermitianOperator& y) {
  const int n = state.dim();
  if (x.dim() != n || y.dim() != n)
    throw std::invalid_argument("dense_joint_expectation: dimension mismatch");
  const CVector& psi = state.vector();
  CVector out(psi.size());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Complex acc(0, 0);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          acc += x(i, j) * y(k, l) * psi[j * n + l];
      out[i * n + k] = acc;
    }
  return psi.dot(out).real();
}

}  // namespace lhv
