#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "mot/rounding.hpp"

using namespace mot;

TEST_CASE("already feasible plans pass through unchanged") {
  SplitMix64 rng(201);
  for (int trial = 0; trial < 5; ++trial) {
    MarginalSet r;
    for (int k = 0; k < 3; ++k)
      r.push_back(testutil::random_interior_marginal(rng, 3));
    const DenseTensor X = testutil::product_plan(r);
    const RoundResult res = round_to_polytope(X, r);
    CHECK_FALSE(res.report.correctionApplied);
    CHECK(res.report.l1Move <= 1e-12);
    for (std::size_t i = 0; i < X.data.size(); ++i)
      CHECK(res.plan.data[i] == doctest::Approx(X.data[i]).epsilon(1e-12));
  }
}

TEST_CASE("hand-simulated 2x2 case") {
  DenseTensor X = zeros(Shape({2, 2}));
  X.data = {0.5, 0.0, 0.0, 0.25};
  MarginalSet r(2, Vec{0.5, 0.5});
  const RoundResult res = round_to_polytope(X, r);
  CHECK(res.plan.data[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(res.plan.data[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(res.plan.data[2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(res.plan.data[3] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(res.report.errNorms[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(res.report.errNorms[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(res.report.correctionApplied);
}

TEST_CASE("zero slice in the running marginal: deficit goes to the correction") {
  // r_1 has mass on index 1 but X's first-axis slice 1 is empty.
  DenseTensor X = zeros(Shape({2, 2}));
  X.data = {0.3, 0.3, 0.0, 0.0};
  MarginalSet r{{0.6, 0.4}, {0.5, 0.5}};
  const RoundResult res = round_to_polytope(X, r);
  for (std::size_t k = 0; k < 2; ++k) {
    const Vec marg = marginal(res.plan, k);
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(marg[j] == doctest::Approx(r[k][j]).epsilon(1e-12));
  }
}

TEST_CASE("feasibility, the l1 bound and nonnegativity on random inputs") {
  SplitMix64 rng(203);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 2 + rng.uniform_index(2);
    const std::size_t n = 2 + rng.uniform_index(5);
    MarginalSet r;
    for (std::size_t k = 0; k < m; ++k)
      r.push_back(testutil::random_interior_marginal(rng, n));
    const DenseTensor X = testutil::perturbed_plan(rng, r, 0.2);

    double dev = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const Vec marg = marginal(X, k);
      for (std::size_t j = 0; j < n; ++j) dev += std::abs(marg[j] - r[k][j]);
    }

    const RoundResult res = round_to_polytope(X, r);
    for (std::size_t k = 0; k < m; ++k) {
      const Vec marg = marginal(res.plan, k);
      for (std::size_t j = 0; j < n; ++j)
        CHECK(std::abs(marg[j] - r[k][j]) <= 1e-9);
    }
    for (double v : res.plan.data) CHECK(v >= 0.0);
    CHECK(res.report.l1Move <= 2.0 * dev + 1e-12);

    // All err_k have the same mass 1 - ||X^(m)||_1.
    for (std::size_t k = 1; k < m; ++k)
      CHECK(std::abs(res.report.errNorms[k] - res.report.errNorms[0]) <=
            1e-10);
  }
}

TEST_CASE("rounding is idempotent") {
  SplitMix64 rng(207);
  for (int trial = 0; trial < 10; ++trial) {
    MarginalSet r;
    for (int k = 0; k < 3; ++k)
      r.push_back(testutil::random_interior_marginal(rng, 3));
    const DenseTensor X = testutil::perturbed_plan(rng, r, 0.1);
    const RoundResult once = round_to_polytope(X, r);
    const RoundResult twice = round_to_polytope(once.plan, r);
    for (std::size_t i = 0; i < X.data.size(); ++i)
      CHECK(std::abs(twice.plan.data[i] - once.plan.data[i]) <= 1e-12);
  }
}

TEST_CASE("input validation") {
  DenseTensor X = zeros(Shape({2, 2}));
  X.data = {0.9, 0.9, 0.0, 0.0};  // mass > 1
  MarginalSet r(2, Vec{0.5, 0.5});
  CHECK_THROWS_AS(round_to_polytope(X, r), std::invalid_argument);
  X.data = {0.5, -0.1, 0.0, 0.0};
  CHECK_THROWS_AS(round_to_polytope(X, r), std::invalid_argument);
}
