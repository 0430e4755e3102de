#pragma once

#include <string>
#include <vector>

#include "lhv/rng.hpp"
#include "lhv/state.hpp"

namespace lhv {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

namespace detail {

inline CVector apply_alice(const HermitianOperator& op, const CVector& psi) {
  const int n = op.dim();
  CVector out = CVector::Zero(psi.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[i * n + k] += op(i, j) * psi[j * n + k];
  return out;
}

inline CVector apply_bob(const HermitianOperator& op, const CVector& psi) {
  const int n = op.dim();
  CVector out = CVector::Zero(psi.size());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) out[i * n + k] += op(k, l) * psi[i * n + l];
  return out;
}

}  // namespace detail

/// Residual of the partner identity (O ⊗ I)|psi> = (I ⊗ O^T)|psi>.
inline double transpose_partner_residual(const HermitianOperator& op,
                                         const MaxEntangledState& state) {
  const HermitianOperator partner = transpose_partner(op, state.schmidt());
  return (detail::apply_alice(op, state.vector()) -
          detail::apply_bob(partner, state.vector()))
      .norm();
}

/// Regression suite over the operator and state identities at one dimension:
/// seeded random instances checked against dense-contraction oracles.
inline std::vector<CheckResult> identity_checks(int dim, std::uint64_t seed,
                                                int count = 100) {
  if (dim < 2) throw std::invalid_argument("identity_checks: dim must be >= 2");
  Rng rng(seed);
  const SchmidtBasis schmidt = random_schmidt(dim, rng);
  const MaxEntangledState state(schmidt);
  const auto basis_a = build_basis(schmidt, Side::Alice);
  const auto basis_b = build_basis(schmidt, Side::Bob);

  std::vector<CheckResult> results;
  auto record = [&](std::string name, double residual, double tolerance) {
    results.push_back({std::move(name), residual, tolerance, residual < tolerance});
  };

  {
    double dev = 0.0;
    for (int k = 0; k < basis_a.size(); ++k)
      for (int l = 0; l < basis_a.size(); ++l) {
        const double expected = k == l ? 1.0 : 0.0;
        dev = std::max(dev, std::abs(hs_inner(basis_a[k], basis_a[l]) - expected));
        dev = std::max(dev, std::abs(hs_inner(basis_b[k], basis_b[l]) - expected));
      }
    record("basis orthonormality", dev, tol::basis_ortho);
  }
  {
    double dev = 0.0;
    for (int k = 0; k < basis_a.size(); ++k) {
      const auto partner = transpose_partner(basis_a[k], schmidt);
      dev = std::max(dev,
                     (partner.entries() - basis_b[k].entries()).cwiseAbs().maxCoeff());
    }
    record("bob basis is the transpose partner", dev, tol::basis_ortho);
  }
  {
    double dev = 0.0;
    for (int rep = 0; rep < count; ++rep)
      dev = std::max(dev, transpose_partner_residual(random_hermitian(dim, rng), state));
    record("transpose-partner identity", dev, tol::partner);
  }
  {
    double dev = 0.0;
    for (int rep = 0; rep < count; ++rep) {
      const HermitianOperator op = random_hermitian(dim, rng);
      const auto back = devectorize(vectorize(op, basis_a), basis_a);
      dev = std::max(dev, (back.entries() - op.entries()).cwiseAbs().maxCoeff());
      const auto a = vectorize(op, basis_a);
      dev = std::max(dev, std::abs(a.squared_norm() - hs_inner(op, op)));
    }
    record("vectorization round trip and Parseval", dev, tol::reconstruct);
  }
  {
    double dev = 0.0;
    for (int rep = 0; rep < count; ++rep) {
      RVector ac(dim * dim), bc(dim * dim);
      for (int k = 0; k < dim * dim; ++k) ac[k] = rng.gaussian(), bc[k] = rng.gaussian();
      const CoefficientVector a(ac, Side::Alice);
      const CoefficientVector b(bc, Side::Bob);
      const double closed = joint_average(state, a, b);
      const double dense = dense_joint_expectation(state, devectorize(a, basis_a),
                                                   devectorize(b, basis_b));
      dev = std::max(dev, std::abs(closed - dense));
    }
    record("joint average closed form", dev, tol::reconstruct);
  }
  {
    double dev = 0.0;
    for (int rep = 0; rep < count; ++rep) {
      RVector ac(dim * dim);
      for (int k = 0; k < dim * dim; ++k) ac[k] = rng.gaussian();
      const CoefficientVector a(ac, Side::Alice);
      const HermitianOperator op = devectorize(a, basis_a);
      const double dense = dense_joint_expectation(
          state, HermitianOperator(Matrix(op.entries() * op.entries())),
          HermitianOperator(Matrix::Identity(dim, dim)));
      dev = std::max(dev, std::abs(dense - a.squared_norm() / dim));
    }
    record("squared average closed form", dev, tol::reconstruct);
  }
  {
    double dev = 0.0;
    for (int rep = 0; rep < count; ++rep) {
      RVector ac(dim * dim), bc(dim * dim);
      for (int k = 0; k < dim * dim; ++k) ac[k] = rng.gaussian(), bc[k] = rng.gaussian();
      ac.head(dim).array() -= ac.head(dim).sum() / dim;
      bc.head(dim).array() -= bc.head(dim).sum() / dim;
      const CoefficientVector a(ac, Side::Alice);
      const CoefficientVector b(bc, Side::Bob);
      const HermitianOperator opa = devectorize(a, basis_a);
      const HermitianOperator opb = devectorize(b, basis_b);
      const HermitianOperator id(Matrix::Identity(dim, dim));
      const double ab = dense_joint_expectation(state, opa, opb);
      const double a2 = dense_joint_expectation(
          state, HermitianOperator(Matrix(opa.entries() * opa.entries())), id);
      const double b2 = dense_joint_expectation(
          state, id, HermitianOperator(Matrix(opb.entries() * opb.entries())));
      dev = std::max(dev, std::abs(pearson(state, a, b) - ab / std::sqrt(a2 * b2)));
    }
    record("pearson correlation closed form", dev, tol::reconstruct);
  }
  {
    double dev = 0.0;
    for (Side side : {Side::Alice, Side::Bob})
      dev = std::max(dev, (state.reduced_density(side) -
                           Matrix::Identity(dim, dim) / double(dim))
                              .cwiseAbs()
                              .maxCoeff());
    record("reduced densities are I/N", dev, tol::reconstruct);
  }
  return results;
}

}  // namespace lhv
