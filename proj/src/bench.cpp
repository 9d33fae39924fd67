#include "mot/bench.hpp"

#include <cmath>
#include <stdexcept>

#include "mot/rng.hpp"

namespace mot {

SyntheticImage gen_synthetic_image(std::size_t side, double fgFraction,
                                   std::uint64_t seed) {
  if (side < 2) throw std::domain_error("side must be >= 2");
  if (fgFraction <= 0.0 || fgFraction >= 1.0)
    throw std::domain_error("fgFraction must be in (0, 1)");

  SyntheticImage img;
  img.side = side;
  img.fgSide = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(
             static_cast<double>(side) * std::sqrt(fgFraction))));

  SplitMix64 rng(seed);
  img.fgRow = rng.uniform_index(side - img.fgSide + 1);
  img.fgCol = rng.uniform_index(side - img.fgSide + 1);

  img.marginal.resize(side * side);
  img.locations.resize(side * side);
  double total = 0.0;
  const double scale = 1.0 / static_cast<double>(side - 1);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      const bool fg = i >= img.fgRow && i < img.fgRow + img.fgSide &&
                      j >= img.fgCol && j < img.fgCol + img.fgSide;
      const double v = rng.uniform() * (fg ? 50.0 : 1.0);
      img.marginal[i * side + j] = v;
      img.locations[i * side + j] = {static_cast<double>(i) * scale,
                                     static_cast<double>(j) * scale};
      total += v;
    }
  }
  for (double& v : img.marginal) v /= total;
  return img;
}

DenseTensor barycenter_cost(const std::vector<PointList>& locations,
                            const Vec& lambda) {
  const std::size_t m = locations.size();
  if (m == 0 || lambda.size() != m)
    throw std::invalid_argument("need one weight per point set");
  double lsum = 0.0;
  for (double l : lambda) {
    if (l < 0.0) throw std::invalid_argument("negative weight");
    lsum += l;
  }
  if (std::abs(lsum - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to 1");
  const std::size_t n = locations[0].size();
  const std::size_t d = locations[0][0].size();
  for (const PointList& pl : locations) {
    if (pl.size() != n) throw std::invalid_argument("point sets must match");
    for (const Point& p : pl)
      if (p.size() != d) throw std::invalid_argument("dimension mismatch");
  }

  DenseTensor C = zeros(Shape(std::vector<std::size_t>(m, n)));
  std::vector<std::size_t> idx(m, 0);
  Point mean(d);
  for (std::size_t flat = 0; flat < C.data.size(); ++flat) {
    for (std::size_t c = 0; c < d; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += lambda[k] * locations[k][idx[k]][c];
      mean[c] = s;
    }
    double cost = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double sq = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = locations[k][idx[k]][c] - mean[c];
        sq += diff * diff;
      }
      cost += 0.5 * lambda[k] * sq;
    }
    C.data[flat] = cost;
    for (std::size_t k = m; k-- > 0;) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
  }
  return C;
}

double metric_d(const DenseTensor& X, const MarginalSet& r) {
  double total = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Vec marg = marginal(X, k);
    for (std::size_t j = 0; j < marg.size(); ++j)
      total += std::abs(marg[j] - r[k][j]);
  }
  return total;
}

double competitive_ratio(double d1, double d2) {
  if (d1 <= 0.0 || d2 <= 0.0)
    throw std::domain_error("competitive ratio needs positive distances");
  return std::log(d1 / d2);
}

PointCloud extract_barycenter(const DenseTensor& plan,
                              const std::vector<PointList>& locations,
                              const Vec& lambda, double massThreshold) {
  const std::size_t m = plan.shape.axes();
  if (locations.size() != m || lambda.size() != m)
    throw std::invalid_argument("locations/weights must match plan order");
  const double cutoff = massThreshold * norm1(plan);
  const std::size_t d = locations[0][0].size();

  PointCloud out;
  double total = 0.0;
  std::vector<std::size_t> idx(m, 0);
  for (std::size_t flat = 0; flat < plan.data.size(); ++flat) {
    const double w = plan.data[flat];
    if (w > cutoff) {
      Point p(d, 0.0);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t c = 0; c < d; ++c)
          p[c] += lambda[k] * locations[k][idx[k]][c];
      out.locations.push_back(std::move(p));
      out.weights.push_back(w);
      total += w;
    }
    for (std::size_t k = m; k-- > 0;) {
      if (++idx[k] < plan.shape.sizes[k]) break;
      idx[k] = 0;
    }
  }
  if (out.weights.empty())
    throw std::runtime_error("no plan mass above the threshold");
  for (double& w : out.weights) w /= total;
  return out;
}

Vec rasterize(const PointCloud& cloud, std::size_t g) {
  if (g < 1) throw std::domain_error("grid must have at least one cell");
  Vec img(g * g, 0.0);
  if (g == 1) {
    for (double w : cloud.weights) img[0] += w;
    return img;
  }
  const double span = static_cast<double>(g - 1);
  for (std::size_t i = 0; i < cloud.locations.size(); ++i) {
    const Point& p = cloud.locations[i];
    if (p.size() != 2) throw std::invalid_argument("rasterize expects 2-d points");
    const double x = std::min(1.0, std::max(0.0, p[0])) * span;
    const double y = std::min(1.0, std::max(0.0, p[1])) * span;
    const auto r0 = static_cast<std::size_t>(x);
    const auto c0 = static_cast<std::size_t>(y);
    const std::size_t r1 = std::min(r0 + 1, g - 1);
    const std::size_t c1 = std::min(c0 + 1, g - 1);
    const double fr = x - static_cast<double>(r0);
    const double fc = y - static_cast<double>(c0);
    const double w = cloud.weights[i];
    img[r0 * g + c0] += w * (1.0 - fr) * (1.0 - fc);
    img[r0 * g + c1] += w * (1.0 - fr) * fc;
    img[r1 * g + c0] += w * fr * (1.0 - fc);
    img[r1 * g + c1] += w * fr * fc;
  }
  return img;
}

}  // namespace mot
