#pragma once

#include "mot/regmot.hpp"

namespace mot {

struct RoundingReport {
  Vec massRemoved;   // per scaling phase k: ||X^{(k-1)}||_1 - ||X^{(k)}||_1
  Vec errNorms;      // ||err_k||_1 per axis (all equal to 1 - ||X^{(m)}||_1)
  double l1Move = 0.0;  // ||Y - X||_1
  bool correctionApplied = false;
};

// Project an almost-feasible nonnegative plan onto the transportation
// polytope: scale each axis slice down to its target marginal, then add a
// rank-one outer product of the per-axis deficits. Guarantees r_k(Y) = r_k
// and ||Y - X||_1 <= 2 sum_k ||r_k(X) - r_k||_1.
struct RoundResult {
  DenseTensor plan;
  RoundingReport report;
};

RoundResult round_to_polytope(const DenseTensor& X, const MarginalSet& r);

}  // namespace mot
