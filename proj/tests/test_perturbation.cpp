#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ginv/errors.hpp"
#include "ginv/passage.hpp"
#include "ginv/perturb.hpp"
#include "test_support.hpp"

using namespace ginv;

namespace {

Matrix c1_shift() { return Matrix{{-0.25, 0.25}, {0.0, 0.0}}; }

}  // namespace

TEST_CASE("perturbed stationary vectors of the fixtures") {
  const StochasticChain c1 = testing::c1_chain();
  // Both rows of the perturbed chain equal (0.25, 0.75).
  CHECK(max_abs_diff(perturbed_stationary(c1, c1_shift()),
                     Vector{0.25, 0.75}) < 1e-12);

  CHECK(max_abs_diff(perturbed_stationary(c1, Matrix(2, 2, 0.0)), c1.pi()) <
        1e-14);

  const StochasticChain c0 = testing::c0_chain();
  const Matrix swap{{-0.25, 0.25}, {0.25, -0.25}};
  CHECK(max_abs_diff(perturbed_stationary(c0, swap), Vector{0.5, 0.5}) <
        1e-14);
}

TEST_CASE("invalid perturbations are rejected with the offending row") {
  const StochasticChain c1 = testing::c1_chain();
  try {
    validate_perturbation(c1, Matrix{{0.1, 0.0}, {0.0, 0.0}});
    FAIL("expected NotStochastic");
  } catch (const NotStochastic& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
  // Row sums are zero but an entry of P + E would turn negative.
  CHECK_THROWS_AS(
      validate_perturbation(c1, Matrix{{0.6, -0.6}, {0.0, 0.0}}),
      NotStochastic);
}

TEST_CASE("n_matrix fixtures and input checking") {
  CHECK(max_abs_diff(n_matrix(testing::c1_mfpt()),
                     Matrix{{0.0, 4.0 / 3.0}, {4.0 / 3.0, 0.0}}) < 1e-14);
  CHECK(max_abs_diff(n_matrix(Matrix{{2.0, 2.0}, {2.0, 2.0}}),
                     Matrix{{0.0, 1.0}, {1.0, 0.0}}) == 0.0);
  CHECK(max_abs_diff(n_matrix(Matrix{{2.0, 1.0}, {1.0, 2.0}}),
                     Matrix{{0.0, 0.5}, {0.5, 0.0}}) == 0.0);
  CHECK_THROWS_AS(n_matrix(Matrix(2, 3)), ShapeMismatch);
}

TEST_CASE("all shift routes agree on the C1 example") {
  const StochasticChain c1 = testing::c1_chain();
  const Vector expected{-1.0 / 12.0, 1.0 / 12.0};

  const PerturbationReport with_z =
      delta_routes(c1, c1_shift(), fundamental_matrix(c1));
  CHECK(max_abs_diff(with_z.delta, expected) < 1e-12);
  CHECK(with_z.max_route_discrepancy <= 1e-9);
  // The fundamental matrix has constant row sums, so the direct route runs.
  bool saw_direct = false;
  for (const auto& [name, delta] : with_z.route_deltas) {
    if (name == "ginverse") saw_direct = true;
    CHECK(max_abs_diff(delta, expected) < 1e-10);
  }
  CHECK(saw_direct);

  // The Moore-Penrose inverse is not in the constant-row-sum class on C1,
  // so its direct route is skipped; everything else still agrees.
  const PerturbationReport with_mp =
      delta_routes(c1, c1_shift(), moore_penrose(c1));
  CHECK(max_abs_diff(with_mp.delta, expected) < 1e-12);
  for (const auto& [name, delta] : with_mp.route_deltas) {
    CHECK(name != "ginverse");
    CHECK(name != "element_ginverse_simple");
  }

  const PerturbationReport zero =
      delta_routes(c1, Matrix(2, 2, 0.0), fundamental_matrix(c1));
  CHECK(inf_norm(zero.delta) == 0.0);
}

TEST_CASE("kemeny bound on the fixtures") {
  const StochasticChain c1 = testing::c1_chain();
  const KemenyBound bound = kemeny_bound(c1, c1_shift());
  CHECK(bound.lhs == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(bound.bound == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(bound.satisfied);

  const KemenyBound zero = kemeny_bound(c1, Matrix(2, 2, 0.0));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.bound == 0.0);
  CHECK(zero.satisfied);

  const StochasticChain c0 = testing::c0_chain();
  const KemenyBound sym =
      kemeny_bound(c0, Matrix{{-0.25, 0.25}, {0.25, -0.25}});
  CHECK(sym.lhs <= 1e-14);
  CHECK(sym.bound == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sym.satisfied);
}

TEST_CASE("difference equation and route independence on random pairs") {
  testing::Rng rng(90210);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 7;
    const StochasticChain chain = testing::random_chain(rng, m);
    const Matrix e = testing::random_perturbation(rng, chain, 0.1);
    const GInverse g =
        build_parametric(chain, testing::random_params(rng, chain));

    const PerturbationReport report = delta_routes(chain, e, g);

    // (pi_bar - pi)(I - P) = pi_bar E.
    const Vector lhs = report.delta * chain.kernel();
    const Vector rhs = report.pi_bar * e;
    CHECK(max_abs_diff(lhs, rhs) <= 1e-9);

    CHECK(report.max_route_discrepancy <= 1e-9);
    CHECK(report.bound.satisfied);
    CHECK(sum(report.delta) == 0.0);
  }
}

TEST_CASE("the deflated product is invariant across g-inverses") {
  testing::Rng rng(1010);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t m = 2 + trial % 7;
    const StochasticChain chain = testing::random_chain(rng, m);
    const Matrix e = testing::random_perturbation(rng, chain, 0.1);
    const Vector pi_bar = perturbed_stationary(chain, e);
    const Vector weighted = pi_bar * e;

    const Matrix centering =
        Matrix::identity(m) - chain.stationary_projector();
    const GInverse g1 =
        build_parametric(chain, testing::random_params(rng, chain));
    const GInverse g2 =
        build_parametric(chain, testing::random_params(rng, chain));
    const Vector via_g1 = weighted * (g1.matrix * centering);
    const Vector via_g2 = weighted * (g2.matrix * centering);
    CHECK(max_abs_diff(via_g1, via_g2) <= 1e-10);

    // Both equal pi_bar E A#.
    const Vector via_sharp = weighted * group_inverse(chain).matrix;
    CHECK(max_abs_diff(via_g1, via_sharp) <= 1e-10);
  }
}
