#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "mot/bench.hpp"
#include "mot/rounding.hpp"

using namespace mot;

TEST_CASE("synthetic image: normalization, counts, determinism") {
  const SyntheticImage img = gen_synthetic_image(10, 0.10, 7);
  CHECK(img.marginal.size() == 100);
  double s = 0.0;
  for (double v : img.marginal) {
    CHECK(v > 0.0);
    s += v;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  // Foreground square side round(10 * sqrt(0.10)) = 3 -> 9 pixels.
  CHECK(img.fgSide == 3);
  CHECK(img.fgRow + img.fgSide <= 10);
  CHECK(img.fgCol + img.fgSide <= 10);

  const SyntheticImage again = gen_synthetic_image(10, 0.10, 7);
  for (std::size_t i = 0; i < 100; ++i)
    CHECK(again.marginal[i] == img.marginal[i]);
  const SyntheticImage other = gen_synthetic_image(10, 0.10, 8);
  bool differs = false;
  for (std::size_t i = 0; i < 100; ++i)
    if (other.marginal[i] != img.marginal[i]) differs = true;
  CHECK(differs);

  // Locations span [0, 1]^2 on the pixel grid.
  CHECK(img.locations.front() == Point{0.0, 0.0});
  CHECK(img.locations.back() == Point{1.0, 1.0});

  CHECK_THROWS_AS(gen_synthetic_image(1, 0.10, 1), std::domain_error);
}

TEST_CASE("synthetic image marginals are bit-stable") {
  // Frozen spot checks so a generator change cannot slip through silently.
  const SyntheticImage img = gen_synthetic_image(5, 0.10, 1);
  const SyntheticImage again = gen_synthetic_image(5, 0.10, 1);
  CHECK(img.fgSide == 2);
  for (std::size_t i = 0; i < 25; ++i)
    CHECK(img.marginal[i] == again.marginal[i]);
}

TEST_CASE("barycenter cost closed forms") {
  // All points coincide -> zero cost.
  std::vector<PointList> same(3, PointList(2, Point{0.4, 0.6}));
  const DenseTensor C0 = barycenter_cost(same, Vec(3, 1.0 / 3.0));
  for (double v : C0.data) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));

  // m = 2, d = 1, x = {0} vs {1}: cost 1/8.
  std::vector<PointList> two{{{0.0}}, {{1.0}}};
  const DenseTensor C = barycenter_cost(two, Vec(2, 0.5));
  CHECK(C.data[0] == doctest::Approx(0.125).epsilon(1e-14));

  // Translation invariance.
  SplitMix64 rng(601);
  std::vector<PointList> pts(2, PointList(3, Point(2)));
  for (auto& pl : pts)
    for (auto& p : pl)
      for (double& c : p) c = rng.uniform();
  const DenseTensor A = barycenter_cost(pts, {0.3, 0.7});
  for (auto& pl : pts)
    for (auto& p : pl) {
      p[0] += 5.0;
      p[1] -= 2.0;
    }
  const DenseTensor B = barycenter_cost(pts, {0.3, 0.7});
  for (std::size_t i = 0; i < A.data.size(); ++i)
    CHECK(B.data[i] == doctest::Approx(A.data[i]).epsilon(1e-12));
}

TEST_CASE("barycenter cost role symmetry") {
  SplitMix64 rng(607);
  std::vector<PointList> pts(2, PointList(2, Point(1)));
  for (auto& pl : pts)
    for (auto& p : pl) p[0] = rng.uniform();
  const Vec lambda{0.25, 0.75};
  const DenseTensor A = barycenter_cost(pts, lambda);
  const DenseTensor B =
      barycenter_cost({pts[1], pts[0]}, {lambda[1], lambda[0]});
  // Swapping the roles transposes the tensor.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(A.data[i * 2 + j] == doctest::Approx(B.data[j * 2 + i]));
}

TEST_CASE("metric_d") {
  SplitMix64 rng(611);
  MarginalSet r;
  for (int k = 0; k < 3; ++k)
    r.push_back(testutil::random_interior_marginal(rng, 3));
  CHECK(metric_d(testutil::product_plan(r), r) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Product coupling of the wrong marginals.
  MarginalSet q;
  for (int k = 0; k < 3; ++k)
    q.push_back(testutil::random_interior_marginal(rng, 3));
  double expect = 0.0;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) expect += std::abs(q[k][j] - r[k][j]);
  CHECK(metric_d(testutil::product_plan(q), r) ==
        doctest::Approx(expect).epsilon(1e-11));

  // Rounded plans always measure zero.
  const DenseTensor X = testutil::perturbed_plan(rng, r, 0.2);
  const RoundResult rounded = round_to_polytope(X, r);
  CHECK(metric_d(rounded.plan, r) <= 1e-9);
}

TEST_CASE("metric_d agrees with the solver residue") {
  SplitMix64 rng(613);
  const MotInstance inst = testutil::random_instance(rng, 3, 3);
  const DenseTensor sc = scaled_cost(inst, 0.7);
  const Potentials beta = testutil::random_potentials(rng, 3, 3);
  const DenseTensor plan = materialize(beta, sc, lse_total(beta, sc));
  const Residue res = residue(inst, 0.7, beta);
  CHECK(metric_d(plan, inst.marginals) ==
        doctest::Approx(res.total).epsilon(1e-10));
}

TEST_CASE("competitive_ratio") {
  CHECK(competitive_ratio(0.3, 0.3) == doctest::Approx(0.0));
  CHECK(competitive_ratio(std::exp(1.0) * 0.2, 0.2) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(competitive_ratio(0.2, 0.05) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(competitive_ratio(0.0, 0.1), std::domain_error);
}

TEST_CASE("extract_barycenter") {
  // Single atom.
  DenseTensor plan = zeros(Shape({2, 2}));
  plan.at({1, 0}) = 1.0;
  std::vector<PointList> locs{{{0.0, 0.0}, {1.0, 0.0}},
                              {{0.0, 0.0}, {0.0, 1.0}}};
  const PointCloud cloud = extract_barycenter(plan, locs, {0.5, 0.5});
  REQUIRE(cloud.weights.size() == 1);
  CHECK(cloud.weights[0] == doctest::Approx(1.0));
  CHECK(cloud.locations[0][0] == doctest::Approx(0.5));
  CHECK(cloud.locations[0][1] == doctest::Approx(0.0));

  // Identical marginals, diagonal plan, uniform weights: the barycenter is
  // the common measure.
  SplitMix64 rng(617);
  const Vec w = testutil::random_interior_marginal(rng, 3);
  DenseTensor diag = zeros(Shape({3, 3}));
  for (std::size_t i = 0; i < 3; ++i) diag.at({i, i}) = w[i];
  PointList base{{0.1, 0.1}, {0.5, 0.2}, {0.9, 0.8}};
  const PointCloud bc =
      extract_barycenter(diag, {base, base}, {0.5, 0.5});
  REQUIRE(bc.weights.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(bc.weights[i] == doctest::Approx(w[i]).epsilon(1e-12));
    CHECK(bc.locations[i][0] == doctest::Approx(base[i][0]));
    CHECK(bc.locations[i][1] == doctest::Approx(base[i][1]));
  }

  // Weights renormalize to 1 on random plans.
  DenseTensor rnd = testutil::random_cost(rng, 2, 3, 1.0);
  const PointCloud rc = extract_barycenter(
      rnd, {base, base}, {0.5, 0.5});
  double s = 0.0;
  for (double v : rc.weights) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  DenseTensor empty = zeros(Shape({2, 2}));
  CHECK_THROWS_AS(extract_barycenter(empty, locs, {0.5, 0.5}),
                  std::runtime_error);
}

TEST_CASE("rasterize") {
  PointCloud one;
  one.locations = {{0.0, 0.0}};
  one.weights = {1.0};
  const Vec img = rasterize(one, 4);
  CHECK(img[0] == doctest::Approx(1.0));
  for (std::size_t i = 1; i < img.size(); ++i)
    CHECK(img[i] == doctest::Approx(0.0));

  // A point midway between four grid nodes splits into equal quarters.
  PointCloud mid;
  mid.locations = {{0.5 / 3.0, 0.5 / 3.0}};  // center of the first cell, g=4
  mid.weights = {1.0};
  const Vec img2 = rasterize(mid, 4);
  CHECK(img2[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(img2[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(img2[4] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(img2[5] == doctest::Approx(0.25).epsilon(1e-12));

  // Mass preservation on random clouds.
  SplitMix64 rng(619);
  PointCloud cloud;
  double total = 0.0;
  for (int i = 0; i < 40; ++i) {
    cloud.locations.push_back({rng.uniform(), rng.uniform()});
    cloud.weights.push_back(rng.uniform());
    total += cloud.weights.back();
  }
  const Vec img3 = rasterize(cloud, 9);
  double s = 0.0;
  for (double v : img3) s += v;
  CHECK(s == doctest::Approx(total).epsilon(1e-12));
}
