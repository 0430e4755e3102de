#include <catch2/catch_amalgamated.hpp>

#include "lhv/rng.hpp"
#include "lhv/theorem.hpp"

using namespace lhv;

namespace {

CoefficientVector omega_setting(const OperatorBasis& basis, Rng& rng) {
  return vectorize(random_omega_operator(basis.dim(), rng), basis);
}

RVector sigma_z_coeffs() {
  RVector z(4);
  z << 1, -1, 0, 0;
  return z;
}

}  // namespace

TEST_CASE("bound arithmetic") {
  SECTION("fixed values") {
    REQUIRE(per_step_bound(1, 2.0, 2) == 4.0);
    REQUIRE_THAT(per_step_bound(2, 2.0, 2), Catch::Matchers::WithinAbs(2.0, 1e-15));
    REQUIRE_THAT(per_step_bound(32, 2.0, 2),
                 Catch::Matchers::WithinRel(9.63054665560622751e-3, 1e-12));
    REQUIRE(final_bound(1, 2.0, 2) == 2.0);
    REQUIRE_THAT(chain_bound(16, 2.0, 2),
                 Catch::Matchers::WithinRel(64 * std::pow(std::sin(std::numbers::pi / 32), 2), 1e-15));
    REQUIRE_THAT(final_bound(32, 2.0, 2),
                 Catch::Matchers::WithinRel(64 * std::pow(std::sin(std::numbers::pi / 64), 2), 1e-15));
  }

  SECTION("chain and final relate exactly to the per-step bound") {
    for (int n : {1, 2, 3, 7, 32, 501}) {
      const double step = per_step_bound(n, 2.0, 3);
      REQUIRE_THAT(chain_bound(n, 2.0, 3), Catch::Matchers::WithinRel(n * step, 1e-15));
      REQUIRE_THAT(final_bound(n, 2.0, 3),
                   Catch::Matchers::WithinRel(n * step / 2.0, 1e-15));
    }
  }

  SECTION("final bound decreases monotonically and vanishes") {
    double prev = final_bound(1, 2.0, 2);
    for (int n = 2; n <= 4096; ++n) {
      const double cur = final_bound(n, 2.0, 2);
      REQUIRE(cur <= prev * (1 + 1e-15));
      prev = cur;
    }
    REQUIRE(final_bound(4096, 2.0, 2) < 1.3e-3);
    // Asymptote pi^2 |a|^2 / (2 n N).
    const double asym = std::numbers::pi * std::numbers::pi / 2048.0;
    REQUIRE_THAT(final_bound(1024, 2.0, 2), Catch::Matchers::WithinRel(asym, 1e-3));
  }

  SECTION("chain bound is non-increasing over a numeric scan") {
    double prev = chain_bound(1, 2.0, 2);
    for (int n = 2; n <= 1024; ++n) {
      const double cur = chain_bound(n, 2.0, 2);
      REQUIRE(cur <= prev * (1 + 1e-15));
      prev = cur;
    }
  }

  SECTION("invalid arguments") {
    REQUIRE_THROWS_AS(per_step_bound(0, 2.0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(chain_bound(4, -1.0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(final_bound(4, 2.0, 1), std::invalid_argument);
  }
}

TEST_CASE("verify_step") {
  SECTION("qm-faithful passes every adjacent pair") {
    Rng rng(211);
    const MaxEntangledState state(random_schmidt(3, rng));
    const QmFaithfulModel model(state);
    const auto basis = build_basis(state.schmidt(), Side::Alice);
    const auto a = omega_setting(basis, rng);
    const auto points = partition(make_curve_spec(a, pauli_frame(devectorize(a, basis))),
                                  basis, 4);
    const auto report = verify_step(model, state, points[1], points[2], 4, 500, 100, 7);
    REQUIRE(report.pass);
    REQUIRE(within_std_errors(report.lhs.mean, report.lhs.std_error));
    REQUIRE(report.rhs > 0.0);
  }

  SECTION("leggett at a quarter-turn pair exceeds the per-step bound") {
    const MaxEntangledState state(SchmidtBasis::standard(2));
    const LeggettModel model(state);
    const auto basis = build_basis(state.schmidt(), Side::Alice);
    const CoefficientVector a(sigma_z_coeffs(), Side::Alice);
    const auto points =
        partition(make_curve_spec(a, pauli_frame(devectorize(a, basis))), basis, 4);

    const auto report = verify_step(model, state, points[0], points[1], 4, 20000, 2, 5);
    const double expected = std::cos(std::numbers::pi / 8);  // analytic sphere average
    REQUIRE(within_std_errors(report.lhs.mean - expected, report.lhs.std_error));
    REQUIRE_THAT(report.rhs,
                 Catch::Matchers::WithinRel(4 * std::pow(std::sin(std::numbers::pi / 8), 2), 1e-12));
    REQUIRE_FALSE(report.pass);
    REQUIRE(report.verdict == Verdict::Fail);
  }

  SECTION("degenerate pair: equal settings always pass") {
    Rng rng(223);
    const MaxEntangledState state(random_schmidt(2, rng));
    const QmFaithfulModel model(state);
    const auto basis = build_basis(state.schmidt(), Side::Alice);
    const auto a = omega_setting(basis, rng);
    const auto report = verify_step(model, state, a, a, 4, 200, 5, 11);
    REQUIRE(report.pass);
    REQUIRE(report.rhs > 0.0);
    REQUIRE(within_std_errors(report.lhs.mean, report.lhs.std_error));
  }

  SECTION("settings without unit spectrum are rejected") {
    Rng rng(227);
    const MaxEntangledState state(SchmidtBasis::standard(3));
    const QmFaithfulModel model(state);
    const auto basis = build_basis(state.schmidt(), Side::Alice);
    const auto generic = vectorize(random_hermitian(3, rng), basis);
    REQUIRE_THROWS_AS(verify_step(model, state, generic, generic, 4, 100, 5, 1),
                      std::invalid_argument);
  }
}

TEST_CASE("verify_theorem") {
  SECTION("qm-faithful: sound for 20 random settings per dimension and n") {
    Rng rng(229);
    for (int n_dim : {2, 3, 4}) {
      const MaxEntangledState state(random_schmidt(n_dim, rng));
      const QmFaithfulModel model(state);
      const auto basis = build_basis(state.schmidt(), Side::Alice);
      for (int rep = 0; rep < 20; ++rep) {
        const auto a = omega_setting(basis, rng);
        for (int n : {4, 8, 16, 32}) {
          const auto report =
              verify_theorem(model, state, a, n, 200, 10, derive_seed(13, rep));
          INFO("N=" << n_dim << " rep=" << rep << " n=" << n);
          REQUIRE(report.steps.size() == std::size_t(n));
          for (const auto& s : report.steps) REQUIRE(s.pass);
          REQUIRE_FALSE(report.violated);
          REQUIRE(within_std_errors(report.final_lhs.mean, report.final_lhs.std_error));
          REQUIRE_THAT(report.final_rhs,
                       Catch::Matchers::WithinRel(
                           final_bound(n, a.squared_norm(), n_dim), 1e-12));
        }
      }
    }
  }

  SECTION("leggett: bound too loose at n = 8, exclusion at n = 16") {
    const MaxEntangledState state(SchmidtBasis::standard(2));
    const LeggettModel model(state);
    const CoefficientVector a(sigma_z_coeffs(), Side::Alice);

    const auto loose = verify_theorem(model, state, a, 8, 10000, 2, 17);
    REQUIRE_THAT(loose.final_rhs, Catch::Matchers::WithinAbs(0.60897, 1e-4));
    REQUIRE(within_std_errors(loose.final_lhs.mean - 0.5, loose.final_lhs.std_error));
    REQUIRE_FALSE(loose.violated);

    const auto tight = verify_theorem(model, state, a, 16, 10000, 2, 17);
    REQUIRE_THAT(tight.final_rhs, Catch::Matchers::WithinAbs(0.30744, 1e-4));
    REQUIRE(tight.violated);
    REQUIRE(tight.final_verdict == Verdict::Fail);
  }

  SECTION("nested mu-sampling path stays within the loose small-n bounds") {
    Rng rng(233);
    const MaxEntangledState state(SchmidtBasis::standard(2));
    const QmFaithfulModel nested(state, /*analytic=*/false);
    const auto basis = build_basis(state.schmidt(), Side::Alice);
    const auto a = omega_setting(basis, rng);
    const auto report = verify_theorem(nested, state, a, 2, 150, 150, 19, 2);
    REQUIRE_FALSE(report.violated);
    for (const auto& s : report.steps) {
      REQUIRE(s.pass);
      REQUIRE(s.lhs.std_error > 0.0);  // nested variance propagated
    }
  }

  SECTION("seed reproducibility") {
    const MaxEntangledState state(SchmidtBasis::standard(2));
    const LeggettModel model(state);
    const CoefficientVector a(sigma_z_coeffs(), Side::Alice);
    const auto r1 = verify_theorem(model, state, a, 4, 500, 2, 23, 2);
    const auto r2 = verify_theorem(model, state, a, 4, 500, 2, 23, 2);
    REQUIRE(r1.final_lhs.mean == r2.final_lhs.mean);
    REQUIRE(r1.final_lhs.std_error == r2.final_lhs.std_error);
    for (std::size_t j = 0; j < r1.steps.size(); ++j)
      REQUIRE(r1.steps[j].lhs.mean == r2.steps[j].lhs.mean);
  }
}

TEST_CASE("skew_symmetry_check") {
  SECTION("qm-faithful satisfies both identities") {
    Rng rng(239);
    const MaxEntangledState state(random_schmidt(3, rng));
    const QmFaithfulModel model(state);
    const auto basis = build_basis(state.schmidt(), Side::Alice);
    const auto a = omega_setting(basis, rng);
    const auto report = skew_symmetry_check(model, state, a, 500, 10, 29);
    REQUIRE(report.pass);
    REQUIRE(within_std_errors(report.residual_fg.mean, report.residual_fg.std_error));
    REQUIRE(within_std_errors(report.residual_antisym.mean,
                              report.residual_antisym.std_error));
  }

  SECTION("leggett breaks f = g while keeping antisymmetry") {
    const MaxEntangledState state(SchmidtBasis::standard(2));
    const LeggettModel model(state);
    const CoefficientVector a(sigma_z_coeffs(), Side::Alice);
    const auto report = skew_symmetry_check(model, state, a, 20000, 2, 31);
    REQUIRE_FALSE(report.pass);
    REQUIRE(within_std_errors(report.residual_fg.mean - 1.0,
                              report.residual_fg.std_error));
    REQUIRE(within_std_errors(report.residual_antisym.mean,
                              report.residual_antisym.std_error));
  }

  SECTION("zero setting gives exactly zero residuals") {
    const MaxEntangledState state(SchmidtBasis::standard(2));
    const QmFaithfulModel model(state);
    const CoefficientVector zero(RVector::Zero(4), Side::Alice);
    const auto report = skew_symmetry_check(model, state, zero, 100, 2, 37);
    REQUIRE(report.residual_fg.mean == 0.0);
    REQUIRE(report.residual_antisym.mean == 0.0);
    REQUIRE(report.pass);
  }

  SECTION("settings with nonzero trace are rejected") {
    const MaxEntangledState state(SchmidtBasis::standard(2));
    const QmFaithfulModel model(state);
    RVector idc = RVector::Zero(4);
    idc.head(2).setOnes();
    REQUIRE_THROWS_AS(skew_symmetry_check(model, state,
                                          CoefficientVector(idc, Side::Alice), 100, 2, 1),
                      std::invalid_argument);
  }
}

TEST_CASE("reduce_to_omega") {
  Rng rng(241);

  SECTION("unit-spectrum input: alpha0 vanishes, terms rebuild the input") {
    const auto basis = build_basis(random_schmidt(3, rng), Side::Alice);
    const auto a = omega_setting(basis, rng);
    const auto red = reduce_to_omega(a, basis);
    REQUIRE_THAT(red.alpha0, Catch::Matchers::WithinAbs(0.0, 1e-12));
    RVector sum = RVector::Zero(9);
    for (const auto& [alpha, component] : red.terms) sum += alpha * component.values();
    REQUIRE((sum - a.values()).cwiseAbs().maxCoeff() < 1e-10);
  }

  SECTION("identity coefficients: alpha0 = 1 and no other terms") {
    const auto basis = build_basis(SchmidtBasis::standard(4), Side::Alice);
    RVector idc = RVector::Zero(16);
    idc.head(4).setOnes();
    const auto red = reduce_to_omega(CoefficientVector(idc, Side::Alice), basis);
    REQUIRE_THAT(red.alpha0, Catch::Matchers::WithinAbs(1.0, 1e-12));
    for (const auto& [alpha, component] : red.terms)
      REQUIRE_THAT(alpha, Catch::Matchers::WithinAbs(0.0, 1e-12));
  }

  SECTION("generic observable: linear reconstruction in coefficient space") {
    const auto basis = build_basis(random_schmidt(4, rng), Side::Alice);
    RVector c(16);
    for (int k = 0; k < 16; ++k) c[k] = rng.gaussian();
    const CoefficientVector a(c, Side::Alice);
    const auto red = reduce_to_omega(a, basis);

    RVector idc = RVector::Zero(16);
    idc.head(4).setOnes();
    RVector sum = red.alpha0 * idc;
    for (const auto& [alpha, component] : red.terms) {
      sum += alpha * component.values();
      REQUIRE(classify_spectrum(devectorize(component, basis)).has_value());
    }
    REQUIRE((sum - a.values()).cwiseAbs().maxCoeff() < 1e-10);
  }

  SECTION("intermediate average of a generic observable is its local average") {
    // The closing identity: for the qm-faithful model, the mu-sampled
    // intermediate average of any observable matches Tr/N.
    const MaxEntangledState state(SchmidtBasis::standard(3));
    const QmFaithfulModel nested(state, /*analytic=*/false);
    const auto basis = build_basis(state.schmidt(), Side::Alice);
    const auto basis_b = build_basis(state.schmidt(), Side::Bob);
    const auto op = random_hermitian(3, rng);
    const auto alice = MeasurementSetting::make(vectorize(op, basis), basis);
    const auto bob = MeasurementSetting::make(
        vectorize(random_omega_operator(3, rng), basis_b), basis_b);
    const auto r = estimate_intermediate(nested, alice, bob, {}, 20000, 43, 2);
    REQUIRE(within_std_errors(r.mean - local_average(state, alice.op()), r.std_error));
  }
}
