#pragma once

#include <cstdint>
#include <numbers>
#include <random>

#include "lhv/hermitian.hpp"
#include "lhv/schmidt.hpp"

namespace lhv {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Fixed seed-splitting rule: sub-stream `stream` of a master seed. Used to
/// hand independent, reproducible streams to workers and nested estimators.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 1));
}

/// Deterministic 64-bit generator with explicitly-coded distributions, so that
/// identical seeds produce identical doubles on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (second value cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  Complex complex_gaussian() {
    return Complex(gaussian(), gaussian()) / std::numbers::sqrt2;
  }

  /// Uniform point on the unit 2-sphere.
  Eigen::Vector3d unit_sphere() {
    const double z = 1.0 - 2.0 * uniform();
    const double phi = 2.0 * std::numbers::pi * uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-like random unitary: QR of a complex Gaussian matrix with the phases
/// fixed so the R factor has a positive real diagonal.
inline Matrix random_unitary(int dim, Rng& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    const double a = std::abs(d);
    q.col(k) *= (a > 0) ? d / a : Complex(1, 0);
  }
  return q;
}

/// GUE-style random Hermitian matrix (G + G†)/2 with unit-variance entries.
inline HermitianOperator random_hermitian(int dim, Rng& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
  return HermitianOperator::symmetrized(g);
}

/// Random operator with eigenvalues {+1, 0, ..., 0, -1}: a seeded unitary
/// conjugation of diag(1, 0, ..., 0, -1).
inline HermitianOperator random_omega_operator(int dim, Rng& rng) {
  RVector d = RVector::Zero(dim);
  d[0] = 1.0;
  d[dim - 1] = -1.0;
  const Matrix u = random_unitary(dim, rng);
  return HermitianOperator::symmetrized(u * d.asDiagonal() * u.adjoint());
}

inline SchmidtBasis random_schmidt(int dim, Rng& rng) {
  Matrix a = random_unitary(dim, rng);
  Matrix b = random_unitary(dim, rng);
  return SchmidtBasis(std::move(a), std::move(b));
}

}  // namespace lhv
