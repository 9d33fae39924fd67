#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mot/regmot.hpp"
#include "mot/rng.hpp"

namespace testutil {

using mot::DenseTensor;
using mot::MarginalSet;
using mot::MotInstance;
using mot::Potentials;
using mot::Shape;
using mot::Vec;

inline Vec random_interior_marginal(mot::SplitMix64& rng, std::size_t n,
                                    double floor = 0.1) {
  Vec r(n);
  double s = 0.0;
  for (double& v : r) {
    v = floor + rng.uniform();
    s += v;
  }
  for (double& v : r) v /= s;
  return r;
}

inline DenseTensor random_cost(mot::SplitMix64& rng, std::size_t m,
                               std::size_t n, double hi = 1.0) {
  DenseTensor C = mot::zeros(Shape(std::vector<std::size_t>(m, n)));
  for (double& v : C.data) v = rng.uniform(0.0, hi);
  return C;
}

inline MotInstance random_instance(mot::SplitMix64& rng, std::size_t m,
                                   std::size_t n, double costHi = 1.0,
                                   double floor = 0.1) {
  MarginalSet r;
  for (std::size_t k = 0; k < m; ++k)
    r.push_back(random_interior_marginal(rng, n, floor));
  return {random_cost(rng, m, n, costHi), std::move(r)};
}

// Product coupling of the given marginals: always feasible.
inline DenseTensor product_plan(const MarginalSet& r) {
  const std::size_t m = r.size();
  std::vector<std::size_t> sizes(m);
  for (std::size_t k = 0; k < m; ++k) sizes[k] = r[k].size();
  DenseTensor X = mot::zeros(Shape(sizes));
  std::vector<std::size_t> idx(m, 0);
  for (std::size_t flat = 0; flat < X.data.size(); ++flat) {
    double p = 1.0;
    for (std::size_t k = 0; k < m; ++k) p *= r[k][idx[k]];
    X.data[flat] = p;
    for (std::size_t k = m; k-- > 0;) {
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
    }
  }
  return X;
}

// Feasible plan knocked slightly off the polytope, rescaled to mass <= 1.
inline DenseTensor perturbed_plan(mot::SplitMix64& rng, const MarginalSet& r,
                                  double noise = 0.05) {
  DenseTensor X = product_plan(r);
  for (double& v : X.data) v = std::max(0.0, v * (1.0 + rng.uniform(-noise, noise)));
  const double mass = mot::norm1(X);
  if (mass > 1.0)
    for (double& v : X.data) v /= mass;
  return X;
}

inline Potentials random_potentials(mot::SplitMix64& rng, std::size_t m,
                                    std::size_t n, double hi = 1.0) {
  Potentials beta(m, Vec(n));
  for (auto& b : beta)
    for (double& v : b) v = rng.uniform(-hi, hi);
  return beta;
}

// Reference marginal: materialize B(beta) and sum directly.
inline Vec brute_marginal(const Potentials& beta, const DenseTensor& sc,
                          std::size_t axis) {
  return mot::marginal(mot::materialize(beta, sc), axis);
}

// Classical two-marginal Sinkhorn on the kernel exp(-C/eta), alternating
// exact row/column scalings in the log domain; independent of the library
// solver code paths.
inline DenseTensor classical_sinkhorn_2(const DenseTensor& C, const Vec& r1,
                                        const Vec& r2, double eta,
                                        double tol = 1e-12,
                                        std::size_t iters = 100000) {
  const std::size_t n1 = C.shape.sizes[0];
  const std::size_t n2 = C.shape.sizes[1];
  Vec logu(n1, 0.0), logv(n2, 0.0);
  auto row_lse = [&](std::size_t i) {
    double mx = -1e300;
    for (std::size_t j = 0; j < n2; ++j)
      mx = std::max(mx, logv[j] - C.data[i * n2 + j] / eta);
    double s = 0.0;
    for (std::size_t j = 0; j < n2; ++j)
      s += std::exp(logv[j] - C.data[i * n2 + j] / eta - mx);
    return mx + std::log(s);
  };
  auto col_lse = [&](std::size_t j) {
    double mx = -1e300;
    for (std::size_t i = 0; i < n1; ++i)
      mx = std::max(mx, logu[i] - C.data[i * n2 + j] / eta);
    double s = 0.0;
    for (std::size_t i = 0; i < n1; ++i)
      s += std::exp(logu[i] - C.data[i * n2 + j] / eta - mx);
    return mx + std::log(s);
  };
  for (std::size_t it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < n1; ++i)
      logu[i] = std::log(r1[i]) - row_lse(i);
    for (std::size_t j = 0; j < n2; ++j)
      logv[j] = std::log(r2[j]) - col_lse(j);
    double err = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
      double rowMass = std::exp(logu[i] + row_lse(i));
      err += std::abs(rowMass - r1[i]);
    }
    if (err < tol) break;
  }
  DenseTensor P = mot::zeros(C.shape);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      P.data[i * n2 + j] =
          std::exp(logu[i] + logv[j] - C.data[i * n2 + j] / eta);
  return P;
}

}  // namespace testutil
