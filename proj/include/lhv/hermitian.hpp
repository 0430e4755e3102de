#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace lhv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Numerical tolerances used by the type invariants and operation contracts.
namespace tol {
inline constexpr double hermitian = 1e-12;     // Hermiticity at construction
inline constexpr double orthonormal = 1e-12;   // Schmidt / context bases
inline constexpr double basis_ortho = 1e-10;   // operator-basis orthonormality
inline constexpr double reconstruct = 1e-10;   // spectral / Cartan reconstruction
inline constexpr double commute = 1e-10;       // commutator norm of components
inline constexpr double spectrum = 1e-8;       // eigenvalue pattern matching
inline constexpr double degeneracy = 1e-8;     // eigenvalue-equality threshold
inline constexpr double diagonal = 1e-8;       // context diagonalizes operator
inline constexpr double vanishing = 1e-10;     // "vanishing average" cutoff
inline constexpr double partner = 1e-12;       // transpose-partner identity
inline constexpr double stat_floor = 1e-12;    // absolute slack on 3-sigma checks
}  // namespace tol

enum class Side { Alice, Bob };

inline const char* to_string(Side s) { return s == Side::Alice ? "Alice" : "Bob"; }
inline Side other_side(Side s) { return s == Side::Alice ? Side::Bob : Side::Alice; }

/// Dense complex Hermitian matrix. Hermiticity is checked at construction and
/// never repaired silently; use `symmetrized` to opt in to (M + M†)/2.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols())
      throw std::invalid_argument("HermitianOperator: matrix is not square");
    if (entries_.rows() < 2)
      throw std::invalid_argument("HermitianOperator: dim must be >= 2");
    const double dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol::hermitian)
      throw std::invalid_argument("HermitianOperator: not Hermitian, max asymmetry " +
                                  std::to_string(dev));
  }

  static HermitianOperator symmetrized(const Matrix& m) {
    if (m.rows() != m.cols())
      throw std::invalid_argument("HermitianOperator: matrix is not square");
    return HermitianOperator((m + m.adjoint()) / 2.0);
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i, j); }

  double trace() const { return entries_.trace().real(); }

 private:
  Matrix entries_;
};

/// Hilbert-Schmidt inner product Tr(x y). Real for Hermitian arguments; the
/// imaginary residue is checked against tol::hermitian.
inline double hs_inner(const HermitianOperator& x, const HermitianOperator& y) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("hs_inner: dimension mismatch");
  // Tr(x y) = sum_ij x_ij y_ji
  const Complex t = (x.entries().array() * y.entries().transpose().array()).sum();
  if (std::abs(t.imag()) > tol::hermitian * std::max(1.0, std::abs(t.real())))
    throw std::runtime_error("hs_inner: non-real trace, imag residue " +
                             std::to_string(t.imag()));
  return t.real();
}

/// Eigendecomposition with eigenvalues in descending order and a deterministic
/// eigenvector convention (see `eigensystem`).
struct EigenSystem {
  RVector eigenvalues;  // descending
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
  }
};

namespace detail {

/// Rotate the global phase so the largest-magnitude component (first such
/// index on ties) is real and positive.
inline void fix_phase(Eigen::Ref<CVector> v) {
  int k = 0;
  double best = -1.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      k = i;
    }
  }
  if (best <= 0.0) return;
  v *= std::conj(v[k]) / best;
}

}  // namespace detail

/// Spectral decomposition of a Hermitian operator, descending eigenvalues.
///
/// Output is deterministic for identical input. Inside a degenerate eigenvalue
/// cluster (adjacent gap below tol::degeneracy) the eigenvectors are re-derived
/// by projecting standard basis vectors into the eigenspace in index order and
/// orthonormalizing sequentially, dropping residuals below 1e-8; every
/// eigenvector's phase is then fixed so its largest component is real positive.
inline EigenSystem eigensystem(const HermitianOperator& op) {
  const int n = op.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op.entries());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensystem: solver failed to converge");

  EigenSystem es;
  es.eigenvalues = solver.eigenvalues().reverse();
  es.eigenvectors = solver.eigenvectors().rowwise().reverse();

  // Deterministic basis inside each degenerate cluster.
  int start = 0;
  while (start < n) {
    int stop = start + 1;
    while (stop < n && es.eigenvalues[stop - 1] - es.eigenvalues[stop] < tol::degeneracy)
      ++stop;
    const int m = stop - start;
    if (m > 1) {
      const Matrix sub = es.eigenvectors.middleCols(start, m);
      const Matrix proj = sub * sub.adjoint();
      Matrix fresh(n, m);
      int found = 0;
      for (int i = 0; i < n && found < m; ++i) {
        CVector r = proj.col(i);  // projection of standard basis vector e_i
        for (int k = 0; k < found; ++k) r -= fresh.col(k).dot(r) * fresh.col(k);
        const double norm = r.norm();
        if (norm > 1e-8) fresh.col(found++) = r / norm;
      }
      // The projected standard basis always spans the eigenspace; if the
      // threshold discarded too much, keep the solver's (deterministic) columns.
      for (int k = 0; found < m; ++k) {
        CVector r = sub.col(k);
        for (int l = 0; l < found; ++l) r -= fresh.col(l).dot(r) * fresh.col(l);
        const double norm = r.norm();
        if (norm > 1e-8) fresh.col(found++) = r / norm;
      }
      es.eigenvectors.middleCols(start, m) = fresh;
    }
    start = stop;
  }

  for (int k = 0; k < n; ++k) detail::fix_phase(es.eigenvectors.col(k));

  const double residual = (es.reconstruct() - op.entries()).cwiseAbs().maxCoeff();
  if (residual > tol::reconstruct)
    throw std::runtime_error("eigensystem: reconstruction residual " +
                             std::to_string(residual));
  return es;
}

}  // namespace lhv
