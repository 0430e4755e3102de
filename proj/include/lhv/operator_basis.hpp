#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lhv/hermitian.hpp"
#include "lhv/schmidt.hpp"

namespace lhv {

/// Real expansion coefficients of a Hermitian operator in an orthonormal
/// operator basis. Components are ordered: N diagonal slots, then the
/// symmetric off-diagonal slots for i < j in lexicographic order, then the
/// antisymmetric ones likewise.
class CoefficientVector {
 public:
  CoefficientVector(RVector values, Side side)
      : values_(std::move(values)), side_(side) {
    const auto n = static_cast<int>(std::llround(std::sqrt(double(values_.size()))));
    if (n < 2 || static_cast<Eigen::Index>(n) * n != values_.size())
      throw std::invalid_argument("CoefficientVector: length must be N^2 with N >= 2");
    dim_ = n;
  }

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(values_.size()); }
  Side side() const { return side_; }
  const RVector& values() const { return values_; }
  double operator[](int k) const { return values_[k]; }

  double norm() const { return values_.norm(); }
  double squared_norm() const { return values_.squaredNorm(); }

  /// Trace of the represented operator: only diagonal basis elements carry trace.
  double operator_trace() const { return values_.head(dim_).sum(); }

  CoefficientVector with_side(Side s) const { return CoefficientVector(values_, s); }
  CoefficientVector negated() const { return CoefficientVector(-values_, side_); }

 private:
  RVector values_;
  Side side_;
  int dim_;
};

inline double dot(const CoefficientVector& a, const CoefficientVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dot: coefficient vector length mismatch");
  return a.values().dot(b.values());
}

/// Orthonormal Hermitian operator basis tied to a Schmidt basis: N rank-one
/// diagonal projectors, then the symmetric and antisymmetric off-diagonal
/// combinations, each normalized under the Hilbert-Schmidt inner product.
/// Bob's basis is the elementwise transpose partner of Alice's.
class OperatorBasis {
 public:
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  Side side() const { return side_; }
  const HermitianOperator& operator[](int k) const { return elements_[k]; }
  const std::vector<HermitianOperator>& elements() const { return elements_; }

  /// Slot of the diagonal element |x_i><x_i|.
  static int slot_diagonal(int i) { return i; }
  /// Slot of the symmetric pair element for i < j.
  static int slot_plus(int i, int j, int dim) { return dim + pair_index(i, j, dim); }
  /// Slot of the antisymmetric pair element for i < j.
  static int slot_minus(int i, int j, int dim) {
    return dim + dim * (dim - 1) / 2 + pair_index(i, j, dim);
  }

 private:
  static int pair_index(int i, int j, int dim) {
    return i * dim - i * (i + 1) / 2 + (j - i - 1);
  }

  friend OperatorBasis build_basis(const SchmidtBasis&, Side);

  OperatorBasis(int dim, Side side, std::vector<HermitianOperator> elements)
      : dim_(dim), side_(side), elements_(std::move(elements)) {}

  int dim_;
  Side side_;
  std::vector<HermitianOperator> elements_;
};

/// Bob-side partner O^T of an Alice-side operator O: matrix elements are
/// transposed and re-expressed on the {w_j} basis, so that
/// (O ⊗ I)|psi> = (I ⊗ O^T)|psi> on the maximally entangled state.
inline HermitianOperator transpose_partner(const HermitianOperator& op,
                                           const SchmidtBasis& schmidt) {
  if (op.dim() != schmidt.dim())
    throw std::invalid_argument("transpose_partner: dimension mismatch");
  const Matrix& v = schmidt.alice();
  const Matrix& w = schmidt.bob();
  const Matrix elems = v.adjoint() * op.entries() * v;  // o_ij on the {v} basis
  return HermitianOperator(w * elems.conjugate() * w.adjoint());
}

/// The N^2-element operator basis for one side. Alice's elements are built on
/// the {v_j} vectors; Bob's are their transpose partners.
inline OperatorBasis build_basis(const SchmidtBasis& schmidt, Side side) {
  const int n = schmidt.dim();
  const Matrix& v = schmidt.alice();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

  std::vector<HermitianOperator> elems;
  elems.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    elems.emplace_back(Matrix(v.col(i) * v.col(i).adjoint()));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix m = v.col(i) * v.col(j).adjoint();
      elems.emplace_back(Matrix(inv_sqrt2 * (m + m.adjoint())));
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix m = v.col(i) * v.col(j).adjoint();
      elems.emplace_back(Matrix(Complex(0, inv_sqrt2) * (m - Matrix(m.adjoint()))));
    }

  if (side == Side::Bob)
    for (auto& e : elems) e = transpose_partner(e, schmidt);

  OperatorBasis basis(n, side, std::move(elems));
  for (int k = 0; k < basis.size(); ++k)
    for (int l = k; l < basis.size(); ++l) {
      const double expected = (k == l) ? 1.0 : 0.0;
      if (std::abs(hs_inner(basis[k], basis[l]) - expected) > tol::basis_ortho)
        throw std::runtime_error("build_basis: orthonormality violated");
    }
  return basis;
}

/// Expansion coefficients a_k = Tr(F_k O).
inline CoefficientVector vectorize(const HermitianOperator& op,
                                   const OperatorBasis& basis) {
  if (op.dim() != basis.dim())
    throw std::invalid_argument("vectorize: dimension mismatch");
  RVector a(basis.size());
  for (int k = 0; k < basis.size(); ++k) a[k] = hs_inner(basis[k], op);
  return CoefficientVector(std::move(a), basis.side());
}

/// Operator sum_k a_k F_k.
inline HermitianOperator devectorize(const CoefficientVector& a,
                                     const OperatorBasis& basis) {
  if (a.size() != basis.size())
    throw std::invalid_argument("devectorize: coefficient length mismatch");
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  for (int k = 0; k < basis.size(); ++k) m += a[k] * basis[k].entries();
  return HermitianOperator(std::move(m));
}

}  // namespace lhv
