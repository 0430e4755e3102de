#include <catch2/catch_amalgamated.hpp>

#include "lhv/rng.hpp"
#include "lhv/state.hpp"

using namespace lhv;

namespace {

CoefficientVector random_coefficients(int dim, Side side, Rng& rng) {
  RVector c(dim * dim);
  for (int k = 0; k < c.size(); ++k) c[k] = rng.gaussian();
  return CoefficientVector(std::move(c), side);
}

CoefficientVector traceless(const CoefficientVector& a) {
  RVector c = a.values();
  c.head(a.dim()).array() -= a.operator_trace() / a.dim();
  return CoefficientVector(std::move(c), a.side());
}

}  // namespace

TEST_CASE("make_state produces the expected amplitudes and marginals") {
  SECTION("N=2 standard bases") {
    const auto state = make_state(SchmidtBasis::standard(2));
    const double s = 1.0 / std::numbers::sqrt2;
    REQUIRE_THAT(state.vector()[0].real(), Catch::Matchers::WithinAbs(s, 1e-15));
    REQUIRE_THAT(std::abs(state.vector()[1]), Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(std::abs(state.vector()[2]), Catch::Matchers::WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(state.vector()[3].real(), Catch::Matchers::WithinAbs(s, 1e-15));
  }

  SECTION("N=3 standard bases: unit norm, maximally mixed marginals") {
    const auto state = make_state(SchmidtBasis::standard(3));
    REQUIRE_THAT(state.vector().norm(), Catch::Matchers::WithinAbs(1.0, 1e-12));
    const Matrix third = Matrix::Identity(3, 3) / 3.0;
    REQUIRE((state.reduced_density(Side::Alice) - third).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((state.reduced_density(Side::Bob) - third).cwiseAbs().maxCoeff() < 1e-10);
  }

  SECTION("N=4 rotated bases: marginals still I/4") {
    Rng rng(5);
    const auto state = make_state(random_schmidt(4, rng));
    const Matrix quarter = Matrix::Identity(4, 4) / 4.0;
    REQUIRE((state.reduced_density(Side::Alice) - quarter).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((state.reduced_density(Side::Bob) - quarter).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("joint_average agrees with the closed form and the dense oracle") {
  Rng rng(7);
  for (int n = 2; n <= 6; ++n) {
    const SchmidtBasis schmidt = random_schmidt(n, rng);
    const MaxEntangledState state(schmidt);
    const auto basis_a = build_basis(schmidt, Side::Alice);
    const auto basis_b = build_basis(schmidt, Side::Bob);

    double max_dev = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      const auto a = random_coefficients(n, Side::Alice, rng);
      const auto b = random_coefficients(n, Side::Bob, rng);
      const double closed = joint_average(state, a, b);
      const double dense =
          dense_joint_expectation(state, devectorize(a, basis_a), devectorize(b, basis_b));
      max_dev = std::max(max_dev, std::abs(closed - dense));
      REQUIRE_THAT(closed, Catch::Matchers::WithinAbs(dot(a, b) / n, 1e-12));
    }
    INFO("N=" << n);
    REQUIRE(max_dev < 1e-10);
  }
}

TEST_CASE("squared averages follow the norm formula") {
  Rng rng(13);
  for (int n = 2; n <= 6; ++n) {
    const SchmidtBasis schmidt = random_schmidt(n, rng);
    const MaxEntangledState state(schmidt);
    const auto basis_a = build_basis(schmidt, Side::Alice);
    const auto a = random_coefficients(n, Side::Alice, rng);
    const HermitianOperator op = devectorize(a, basis_a);
    const HermitianOperator sq(Matrix(op.entries() * op.entries()));
    const double dense = dense_joint_expectation(
        state, sq, HermitianOperator(Matrix::Identity(n, n)));
    INFO("N=" << n);
    REQUIRE_THAT(dense, Catch::Matchers::WithinAbs(a.squared_norm() / n, 1e-10));
  }
}

TEST_CASE("joint_average special cases") {
  Rng rng(17);
  const SchmidtBasis schmidt = random_schmidt(3, rng);
  const MaxEntangledState state(schmidt);

  const auto a = random_coefficients(3, Side::Alice, rng);
  REQUIRE_THAT(joint_average(state, a, a.with_side(Side::Bob)),
               Catch::Matchers::WithinAbs(a.squared_norm() / 3.0, 1e-12));

  RVector bc = RVector::Zero(9);
  const RVector av = a.values();
  for (int k = 0; k < 9; ++k) bc[k] = rng.gaussian();
  bc -= (bc.dot(av) / av.squaredNorm()) * av;  // orthogonal to a
  const CoefficientVector b(bc, Side::Bob);
  REQUIRE_THAT(joint_average(state, a, b), Catch::Matchers::WithinAbs(0.0, 1e-12));

  REQUIRE_THROWS_AS(joint_average(state, a.with_side(Side::Bob), b),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(joint_average(state, a, b.with_side(Side::Alice)),
                    std::invalid_argument);
  const MaxEntangledState state2(SchmidtBasis::standard(2));
  REQUIRE_THROWS_AS(joint_average(state2, a, b), std::invalid_argument);
}

TEST_CASE("local_average is the normalized trace") {
  Rng rng(19);
  const MaxEntangledState state4(SchmidtBasis::standard(4));
  REQUIRE_THAT(local_average(state4, HermitianOperator(Matrix::Identity(4, 4))),
               Catch::Matchers::WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(local_average(state4, random_omega_operator(4, rng)),
               Catch::Matchers::WithinAbs(0.0, 1e-12));

  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = -1;
  const HermitianOperator op(d);
  const MaxEntangledState state3(SchmidtBasis::standard(3));
  REQUIRE_THAT(local_average(state3, op), Catch::Matchers::WithinAbs(1.0, 1e-12));
  // Cross-check against the dense expectation of op ⊗ I.
  const double dense = dense_joint_expectation(
      state3, op, HermitianOperator(Matrix::Identity(3, 3)));
  REQUIRE_THAT(local_average(state3, op), Catch::Matchers::WithinAbs(dense, 1e-12));

  REQUIRE_THROWS_AS(local_average(state3, HermitianOperator(Matrix::Identity(4, 4))),
                    std::invalid_argument);
}

TEST_CASE("pearson correlation is the coefficient-space cosine") {
  Rng rng(29);
  for (int n : {2, 3, 5}) {
    const SchmidtBasis schmidt = random_schmidt(n, rng);
    const MaxEntangledState state(schmidt);
    const auto basis_a = build_basis(schmidt, Side::Alice);
    const auto basis_b = build_basis(schmidt, Side::Bob);

    const auto a = traceless(random_coefficients(n, Side::Alice, rng));
    const auto b = traceless(random_coefficients(n, Side::Bob, rng));

    REQUIRE_THAT(pearson(state, a, a.with_side(Side::Bob)),
                 Catch::Matchers::WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(pearson(state, a, a.negated().with_side(Side::Bob)),
                 Catch::Matchers::WithinAbs(-1.0, 1e-12));

    const double cosine = dot(a, b) / (a.norm() * b.norm());
    REQUIRE_THAT(pearson(state, a, b), Catch::Matchers::WithinAbs(cosine, 1e-12));

    // Independent moments route: <AB> / sqrt(<A^2><B^2>) via dense contractions.
    const HermitianOperator opa = devectorize(a, basis_a);
    const HermitianOperator opb = devectorize(b, basis_b);
    const HermitianOperator id(Matrix::Identity(n, n));
    const double ab = dense_joint_expectation(state, opa, opb);
    const double a2 = dense_joint_expectation(
        state, HermitianOperator(Matrix(opa.entries() * opa.entries())), id);
    const double b2 = dense_joint_expectation(
        state, id, HermitianOperator(Matrix(opb.entries() * opb.entries())));
    INFO("N=" << n);
    REQUIRE_THAT(pearson(state, a, b),
                 Catch::Matchers::WithinAbs(ab / std::sqrt(a2 * b2), 1e-10));
  }
}

TEST_CASE("pearson rejects nonvanishing averages and zero vectors") {
  const MaxEntangledState state(SchmidtBasis::standard(2));
  RVector ident = RVector::Zero(4);
  ident.head(2).setOnes();
  const CoefficientVector with_trace(ident, Side::Alice);
  RVector zc = RVector::Zero(4);
  zc[2] = 1.0;
  const CoefficientVector fine(zc, Side::Bob);
  REQUIRE_THROWS_AS(pearson(state, with_trace, fine), std::invalid_argument);
  REQUIRE_THROWS_AS(pearson(state, fine.with_side(Side::Alice),
                            CoefficientVector(RVector::Zero(4), Side::Bob)),
                    std::invalid_argument);
}
