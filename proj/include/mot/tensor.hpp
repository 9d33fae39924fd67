#pragma once

#include <cstddef>
#include <vector>

namespace mot {

using Vec = std::vector<double>;

// Per-axis potential vectors beta = (beta_1, ..., beta_m).
using Potentials = std::vector<Vec>;

// Axis sizes n_1..n_m of a dense m-way tensor. Row-major layout with the
// last axis fastest; flat(i_1,...,i_m) = ((i_1*n_2 + i_2)*n_3 + ...) + i_m.
struct Shape {
  std::vector<std::size_t> sizes;

  Shape() = default;
  explicit Shape(std::vector<std::size_t> s);

  std::size_t axes() const { return sizes.size(); }
  std::size_t count() const;  // product of sizes (overflow-checked on build)
  bool operator==(const Shape&) const = default;
};

// Dense m-way tensor of doubles, row-major, last axis fastest.
struct DenseTensor {
  Shape shape;
  Vec data;

  DenseTensor() = default;
  explicit DenseTensor(Shape s);
  DenseTensor(Shape s, Vec d);

  double& at(const std::vector<std::size_t>& idx);
  double at(const std::vector<std::size_t>& idx) const;
  std::size_t flat_index(const std::vector<std::size_t>& idx) const;
};

DenseTensor zeros(Shape s);

// k-th marginal r_k(T): sum over all axes except `axis` (0-based),
// sequential accumulation in flat order.
Vec marginal(const DenseTensor& t, std::size_t axis);

// Frobenius inner product; shapes must match.
double inner(const DenseTensor& a, const DenseTensor& b);

double norm1(const DenseTensor& a);
double normInf(const DenseTensor& a);

// log r_k(B(beta)) with B_i = exp(sum_l beta_{l,i_l} - scaledCost_i), where
// scaledCost holds C/eta. Entirely in the log domain: a per-output-entry max
// pass followed by a sequential exp-sum pass, so no intermediate exponential
// overflows for |log B| <= 700. Entries with no mass come back as -inf.
Vec lse_marginal(const Potentials& beta, const DenseTensor& scaledCost,
                 std::size_t axis);

// log ||B(beta)||_1, same stabilization.
double lse_total(const Potentials& beta, const DenseTensor& scaledCost);

// B(beta) materialized entrywise; logShift is subtracted from every log
// entry first (pass lse_total(...) to get the normalized plan B/||B||_1).
DenseTensor materialize(const Potentials& beta, const DenseTensor& scaledCost,
                        double logShift = 0.0);

// Log-sum-exp of a vector; -inf for all--inf input.
double lse(const Vec& v);

}  // namespace mot
