#pragma once

#include "lhv/hermitian.hpp"

namespace lhv {

/// Paired orthonormal bases {v_j} (Alice) and {w_j} (Bob), stored as the
/// columns of two unitary matrices in computational coordinates.
class SchmidtBasis {
 public:
  SchmidtBasis(Matrix alice_vectors, Matrix bob_vectors)
      : alice_(std::move(alice_vectors)), bob_(std::move(bob_vectors)) {
    check(alice_, "alice");
    check(bob_, "bob");
    if (alice_.rows() != bob_.rows())
      throw std::invalid_argument("SchmidtBasis: side dimensions differ");
  }

  static SchmidtBasis standard(int dim) {
    return SchmidtBasis(Matrix::Identity(dim, dim), Matrix::Identity(dim, dim));
  }

  int dim() const { return static_cast<int>(alice_.rows()); }
  const Matrix& alice() const { return alice_; }
  const Matrix& bob() const { return bob_; }
  CVector alice_vector(int j) const { return alice_.col(j); }
  CVector bob_vector(int j) const { return bob_.col(j); }

 private:
  static void check(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 2)
      throw std::invalid_argument(std::string("SchmidtBasis: ") + what +
                                  " must be square with dim >= 2");
    const double dev =
        (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
    if (dev > tol::orthonormal)
      throw std::invalid_argument(std::string("SchmidtBasis: ") + what +
                                  " vectors not orthonormal, deviation " +
                                  std::to_string(dev));
  }

  Matrix alice_;
  Matrix bob_;
};

}  // namespace lhv
