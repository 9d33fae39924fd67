#pragma once

#include <cstdint>

#include "mot/regmot.hpp"

namespace mot {

using Point = std::vector<double>;        // R^d
using PointList = std::vector<Point>;     // n points

struct PointCloud {
  PointList locations;
  Vec weights;
};

struct SyntheticImage {
  Vec marginal;         // side*side entries, sums to 1
  PointList locations;  // (row, col)/(side-1) in [0,1]^2, row-major
  std::size_t side = 0;
  std::size_t fgSide = 0;      // foreground square side length
  std::size_t fgRow = 0, fgCol = 0;  // top-left corner
};

// Random grayscale image: background intensities U[0,1], a uniformly placed
// axis-aligned foreground square (side round(side*sqrt(fgFraction)), >= 1)
// with intensities U[0,50]; normalized to a probability vector. Driven by
// the portable seeded generator, so outputs are identical across platforms.
SyntheticImage gen_synthetic_image(std::size_t side, double fgFraction,
                                   std::uint64_t seed);

// C_{i_1..i_m} = sum_k (lambda_k/2) ||x^{(k)}_{i_k} - A||^2 with the
// weighted mean A = sum_k lambda_k x^{(k)}_{i_k}.
DenseTensor barycenter_cost(const std::vector<PointList>& locations,
                            const Vec& lambda);

// d(X) = sum_k ||r_k(X) - r_k||_1.
double metric_d(const DenseTensor& X, const MarginalSet& r);

// log(d1 / d2); both must be positive.
double competitive_ratio(double d1, double d2);

// Free-support barycenter: one atom A(x) per multi-index whose plan mass
// exceeds massThreshold * ||plan||_1, weights renormalized to sum 1.
PointCloud extract_barycenter(const DenseTensor& plan,
                              const std::vector<PointList>& locations,
                              const Vec& lambda, double massThreshold = 1e-10);

// Mass-preserving bilinear binning onto a g x g grid over [0,1]^2
// (row-major image, g*g entries). Points outside are clamped to the border.
Vec rasterize(const PointCloud& cloud, std::size_t g);

}  // namespace mot
