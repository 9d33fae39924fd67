#pragma once

#include "mot/report.hpp"
#include "mot/rounding.hpp"

namespace mot {

enum class SolverKind { Greedy, Accelerated };
enum class RoundTarget { Original, Smoothed };

struct ApproxConfig {
  double epsilon = 0.1;            // additive objective tolerance, cost units
  SolverKind solver = SolverKind::Greedy;
  RoundTarget roundTarget = RoundTarget::Original;
  double etaOverride = 0.0;        // 0: use epsilon / (2 m log n)
  double epsPrimeOverride = 0.0;   // 0: use min(1, epsilon / (8 ||C||_inf))
  std::size_t maxIter = 0;         // 0: solver default cap
  std::size_t materializeCap = 20000000;  // refuse plans larger than this
};

struct ApproxResult {
  DenseTensor plan;        // exactly feasible for the original marginals
  double objective = 0.0;  // <C, plan>
  double preRoundObjective = 0.0;  // <C, B(beta)/||B||_1>
  double eta = 0.0;
  double epsPrime = 0.0;
  MarginalSet smoothed;
  SolveReport report;
  RoundingReport roundingReport;
};

// r~_k = (1 - epsPrime/(4m)) r_k + (epsPrime/(4mn)) 1_n; keeps each r~_k on
// the simplex with min entry >= epsPrime/(4mn).
MarginalSet smooth_marginals(const MarginalSet& r, double epsPrime,
                             std::size_t m, std::size_t n);

// Full pipeline: smooth marginals, solve the regularized dual to residue
// epsPrime/2, materialize the normalized plan, round onto the transportation
// polytope. Throws std::runtime_error on solver non-convergence and
// std::length_error when the plan exceeds materializeCap entries.
ApproxResult approx_mot(const MotInstance& inst, const ApproxConfig& cfg);

}  // namespace mot
