#pragma once

#include <numbers>
#include <vector>

#include "lhv/cartan.hpp"
#include "lhv/operator_basis.hpp"

namespace lhv {

/// The two-dimensional subspace L spanned by the +1/-1 eigenvectors of a
/// unit-spectrum observable, with embedded Pauli operators (zero on the
/// kernel K), so the observable itself reads sigma_z and its direction is
/// a_tilde = (0, 0, 1).
struct PauliFrame {
  CVector e_plus;
  CVector e_minus;
  Matrix kernel_basis;  // N x (N-2) columns spanning K
  HermitianOperator sigma_x;
  HermitianOperator sigma_y;
  HermitianOperator sigma_z;
  Eigen::Vector3d a_tilde{0.0, 0.0, 1.0};

  int dim() const { return static_cast<int>(e_plus.size()); }

  /// axis · sigma as an N x N matrix.
  Matrix axis_sigma(const Eigen::Vector3d& axis) const {
    return axis.x() * sigma_x.entries() + axis.y() * sigma_y.entries() +
           axis.z() * sigma_z.entries();
  }

  Matrix l_projector() const {
    return e_plus * e_plus.adjoint() + e_minus * e_minus.adjoint();
  }
};

/// Frame of an operator with spectrum {+1, 0.., -1}. The phases of e_+/e_- are
/// fixed (largest-magnitude component real positive), which pins sigma_x and
/// sigma_y; the result is deterministic for identical input.
inline PauliFrame pauli_frame(const HermitianOperator& op) {
  const EigenSystem es = eigensystem(op);
  if (!classify_spectrum(es.eigenvalues))
    throw std::invalid_argument("pauli_frame: operator spectrum is not {+1, 0.., -1}");
  const int n = op.dim();

  CVector e_plus = es.eigenvectors.col(0);
  CVector e_minus = es.eigenvectors.col(n - 1);
  detail::fix_phase(e_plus);
  detail::fix_phase(e_minus);

  const Matrix pm = e_plus * e_minus.adjoint();  // |e+><e-|
  return PauliFrame{
      e_plus,
      e_minus,
      es.eigenvectors.middleCols(1, n - 2),
      HermitianOperator::symmetrized(pm + pm.adjoint()),
      HermitianOperator::symmetrized(Complex(0, -1) * pm + Complex(0, 1) * pm.adjoint()),
      HermitianOperator::symmetrized(e_plus * e_plus.adjoint() -
                                     e_minus * e_minus.adjoint()),
  };
}

/// Unitary exp(i (theta/2) axis·sigma) on L, identity on K, via the closed
/// two-by-two form cos(theta/2) I_L + i sin(theta/2) axis·sigma (no general
/// matrix exponential involved).
inline Matrix rotation_unitary(const PauliFrame& frame, const Eigen::Vector3d& axis,
                               double theta) {
  if (std::abs(axis.norm() - 1.0) > tol::orthonormal)
    throw std::invalid_argument("rotation_unitary: axis must have unit length");
  if (std::abs(axis.dot(frame.a_tilde)) > tol::orthonormal)
    throw std::invalid_argument("rotation_unitary: axis must be orthogonal to a_tilde");

  const int n = frame.dim();
  const Matrix pl = frame.l_projector();
  Matrix v = Matrix::Identity(n, n) + (std::cos(theta / 2) - 1.0) * pl +
             Complex(0, 1) * std::sin(theta / 2) * frame.axis_sigma(axis);
  const double dev = (v * v.adjoint() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > tol::orthonormal)
    throw std::runtime_error("rotation_unitary: result not unitary, deviation " +
                             std::to_string(dev));
  return v;
}

/// Curve gamma from a to -a: conjugation of the source observable by the
/// rotation family about `axis`, swept over [0, total_angle].
struct CurveSpec {
  CoefficientVector source;
  PauliFrame frame;
  Eigen::Vector3d axis;
  double total_angle;
};

inline CurveSpec make_curve_spec(CoefficientVector source, PauliFrame frame,
                                 Eigen::Vector3d axis = {1.0, 0.0, 0.0},
                                 double total_angle = std::numbers::pi) {
  if (std::abs(axis.norm() - 1.0) > tol::orthonormal ||
      std::abs(axis.dot(frame.a_tilde)) > tol::orthonormal)
    throw std::invalid_argument("make_curve_spec: axis must be unit and orthogonal");
  if (source.dim() != frame.dim())
    throw std::invalid_argument("make_curve_spec: dimension mismatch");
  return CurveSpec{std::move(source), std::move(frame), axis, total_angle};
}

/// a(theta) = coefficients of V_theta A V_theta†.
inline CoefficientVector curve_point(const CurveSpec& spec, const OperatorBasis& basis,
                                     double theta) {
  if (theta < -tol::orthonormal || theta > spec.total_angle + tol::orthonormal)
    throw std::invalid_argument("curve_point: theta outside [0, total_angle]");
  const Matrix v = rotation_unitary(spec.frame, spec.axis, theta);
  const HermitianOperator source = devectorize(spec.source, basis);
  const HermitianOperator rotated =
      HermitianOperator::symmetrized(v * source.entries() * v.adjoint());
  return vectorize(rotated, basis);
}

/// Uniform partition a_j = a(j pi / n), j = 0..n. Endpoints are a and -a and
/// adjacent points satisfy a_{j+1}·a_j = |a|^2 cos(pi/n).
inline std::vector<CoefficientVector> partition(const CurveSpec& spec,
                                                const OperatorBasis& basis, int n) {
  if (n < 1) throw std::invalid_argument("partition: n must be >= 1");
  if (std::abs(spec.total_angle - std::numbers::pi) > tol::orthonormal)
    throw std::invalid_argument("partition: generated curves sweep exactly pi");
  std::vector<CoefficientVector> points;
  points.reserve(n + 1);
  for (int j = 0; j <= n; ++j)
    points.push_back(curve_point(spec, basis, double(j) * std::numbers::pi / n));
  return points;
}

struct SpacingReport {
  bool uniform_ok = false;
  double max_deviation = 0.0;
  double expected_inner = 0.0;  // |a|^2 cos(total_angle / n)
};

/// Checks that all adjacent inner products match |a|^2 cos(total_angle/n),
/// the spacing law for a uniformly-partitioned curve of opening angle
/// total_angle (greater than pi for non-planar paths).
inline SpacingReport verify_partition_spacing(
    const std::vector<CoefficientVector>& points, double total_angle) {
  if (points.size() < 2)
    throw std::invalid_argument("verify_partition_spacing: need at least 2 points");
  const auto segments = static_cast<int>(points.size()) - 1;
  SpacingReport report;
  report.expected_inner =
      points.front().squared_norm() * std::cos(total_angle / segments);
  for (int j = 0; j < segments; ++j)
    report.max_deviation = std::max(
        report.max_deviation,
        std::abs(dot(points[j + 1], points[j]) - report.expected_inner));
  report.uniform_ok = report.max_deviation < tol::reconstruct;
  return report;
}

}  // namespace lhv
