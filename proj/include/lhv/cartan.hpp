#pragma once

#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "lhv/hermitian.hpp"

namespace lhv {

/// Eigenvalue pattern {+1, 0^(N-2), -1}; for N = 2 just {+1, -1}.
enum class SpectrumKind { OmegaN, TwoLevel };

/// Matches descending eigenvalues against the unit-spectrum pattern within
/// `tolerance`; nullopt when the operator has some other spectrum.
inline std::optional<SpectrumKind> classify_spectrum(const RVector& descending,
                                                     double tolerance = tol::spectrum) {
  const auto n = descending.size();
  if (n < 2) return std::nullopt;
  if (std::abs(descending[0] - 1.0) > tolerance) return std::nullopt;
  if (std::abs(descending[n - 1] + 1.0) > tolerance) return std::nullopt;
  for (Eigen::Index k = 1; k + 1 < n; ++k)
    if (std::abs(descending[k]) > tolerance) return std::nullopt;
  return n == 2 ? SpectrumKind::TwoLevel : SpectrumKind::OmegaN;
}

inline std::optional<SpectrumKind> classify_spectrum(const HermitianOperator& op,
                                                     double tolerance = tol::spectrum) {
  return classify_spectrum(eigensystem(op).eigenvalues, tolerance);
}

/// An ordered complete set of one-dimensional projectors, stored as the
/// orthonormal columns of a unitary matrix. Pins down the value assignment
/// for degenerate operators.
class Context {
 public:
  explicit Context(Matrix eigenbasis) : basis_(std::move(eigenbasis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() < 2)
      throw std::invalid_argument("Context: basis must be square with dim >= 2");
    const double dev =
        (basis_.adjoint() * basis_ - Matrix::Identity(basis_.rows(), basis_.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (dev > tol::orthonormal)
      throw std::invalid_argument("Context: basis not orthonormal, deviation " +
                                  std::to_string(dev));
  }

  static Context standard(int dim) { return Context(Matrix::Identity(dim, dim)); }

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Matrix& basis() const { return basis_; }
  CVector column(int k) const { return basis_.col(k); }

  /// Max off-diagonal magnitude of U† op U; zero when the context diagonalizes op.
  double offdiagonal_residual(const HermitianOperator& op) const {
    const Matrix d = basis_.adjoint() * op.entries() * basis_;
    double r = 0.0;
    for (int i = 0; i < d.rows(); ++i)
      for (int j = 0; j < d.cols(); ++j)
        if (i != j) r = std::max(r, std::abs(d(i, j)));
    return r;
  }

 private:
  Matrix basis_;
};

struct CartanTerm {
  double alpha;
  HermitianOperator component;
};

/// alpha0 * I + sum_j alpha_j * C_j with commuting unit-spectrum components
/// C_j sharing the context eigenbasis.
struct CartanDecomposition {
  double alpha0;
  std::vector<CartanTerm> terms;  // N - 1 terms
  Context context;

  Matrix reconstruct(int dim) const {
    Matrix m = alpha0 * Matrix::Identity(dim, dim);
    for (const auto& t : terms) m += t.alpha * t.component.entries();
    return m;
  }
};

/// Splits a Hermitian observable into its trace part plus N-1 commuting
/// components with spectrum {+1, 0.., -1}.
///
/// Components are adjacent projector differences C_j = P_j - P_{j+1} in the
/// context's order, with telescoping coefficients alpha_j = sum_{i<=j} d_i of
/// the centered diagonal values d = diag(op) - alpha0. When no context is
/// given the deterministic eigensystem basis is used.
inline CartanDecomposition cartan_decompose(const HermitianOperator& op,
                                            std::optional<Context> context = {}) {
  const int n = op.dim();
  if (!context) context = Context(eigensystem(op).eigenvectors);
  if (context->dim() != n)
    throw std::invalid_argument("cartan_decompose: context dimension mismatch");
  const double offdiag = context->offdiagonal_residual(op);
  if (offdiag > tol::diagonal)
    throw std::invalid_argument(
        "cartan_decompose: context does not diagonalize operator, residual " +
        std::to_string(offdiag));

  const double alpha0 = op.trace() / n;
  const Matrix& u = context->basis();
  RVector centered(n);
  for (int i = 0; i < n; ++i)
    centered[i] = (u.col(i).adjoint() * op.entries() * u.col(i))(0, 0).real() - alpha0;

  CartanDecomposition dec{alpha0, {}, *context};
  dec.terms.reserve(n - 1);
  double partial = 0.0;
  for (int j = 0; j < n - 1; ++j) {
    partial += centered[j];
    Matrix c = u.col(j) * u.col(j).adjoint() - u.col(j + 1) * u.col(j + 1).adjoint();
    dec.terms.push_back({partial, HermitianOperator::symmetrized(c)});
  }
  return dec;
}

struct DecompositionReport {
  bool commute_ok = false;
  bool spectrum_ok = false;
  double reconstruct_residual = 0.0;  // max-norm deviation from the source
  double max_commutator_norm = 0.0;

  bool ok() const { return commute_ok && spectrum_ok && reconstruct_residual < tol::reconstruct; }
};

/// Checks the decomposition invariants against a source operator. Failures are
/// reported, never thrown.
inline DecompositionReport verify_decomposition(const CartanDecomposition& dec,
                                                const HermitianOperator& source) {
  DecompositionReport report;
  const int n = source.dim();

  report.max_commutator_norm = 0.0;
  for (std::size_t j = 0; j < dec.terms.size(); ++j)
    for (std::size_t k = j + 1; k < dec.terms.size(); ++k) {
      const Matrix& a = dec.terms[j].component.entries();
      const Matrix& b = dec.terms[k].component.entries();
      report.max_commutator_norm =
          std::max(report.max_commutator_norm, (a * b - b * a).norm());
    }
  report.commute_ok = report.max_commutator_norm < tol::commute;

  report.spectrum_ok = true;
  const SpectrumKind expected = n == 2 ? SpectrumKind::TwoLevel : SpectrumKind::OmegaN;
  for (const auto& t : dec.terms) {
    const auto kind = classify_spectrum(t.component);
    if (!kind || *kind != expected) report.spectrum_ok = false;
  }

  report.reconstruct_residual =
      (dec.reconstruct(n) - source.entries()).cwiseAbs().maxCoeff();
  return report;
}

/// For a degenerate operator, produces two contexts that both diagonalize it
/// but whose decompositions contain mutually non-commuting components (the
/// second rotates a pair of vectors inside a degenerate eigenspace by 45
/// degrees). Returns nullopt when all eigenvalues are separated by more than
/// the degeneracy threshold.
inline std::optional<std::pair<Context, Context>> decomposition_ambiguity_witness(
    const HermitianOperator& op) {
  const EigenSystem es = eigensystem(op);
  const int n = op.dim();
  int cluster = -1;
  for (int k = 0; k + 1 < n; ++k)
    if (es.eigenvalues[k] - es.eigenvalues[k + 1] < tol::degeneracy) {
      cluster = k;
      break;
    }
  if (cluster < 0) return std::nullopt;

  Matrix rotated = es.eigenvectors;
  const CVector a = es.eigenvectors.col(cluster);
  const CVector b = es.eigenvectors.col(cluster + 1);
  const double s = 1.0 / std::numbers::sqrt2;
  rotated.col(cluster) = s * (a + b);
  rotated.col(cluster + 1) = s * (a - b);
  return std::make_pair(Context(es.eigenvectors), Context(std::move(rotated)));
}

}  // namespace lhv
