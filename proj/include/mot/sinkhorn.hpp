#pragma once

#include "mot/report.hpp"

namespace mot {

// Greedy axis: argmax_k rho(r_k, r_k(B)/||B||_1), ties to the smallest index.
std::size_t greedy_axis(const MarginalSet& r, const LogMarginals& lm);

// Exact coordinate minimization of axis K:
//   beta_K[j] += log r_K[j] - log([r_K(B)]_j / ||B||_1).
// Afterwards r_K(B)/||B||_1 = r_K, with ||B||_1 unchanged (so it stays 1
// along solver runs started from a normalized point).
void coordinate_update(Potentials& beta, std::size_t K, const Vec& rK,
                       const LogMarginals& lm);

// Default iteration cap ceil(2 + 2 m^2 Rbar / epsPrime) + 10.
std::size_t default_greedy_max_iter(const SolverBounds& b, std::size_t m,
                                    double epsPrime);

// Greedy multimarginal Sinkhorn. Starts from beta = 0 normalized so that
// ||B||_1 = 1, then repeats exact greedy coordinate minimization until the
// residue E_t <= epsPrime or maxIter (0 picks the default cap) is hit.
SolveResult multi_sinkhorn(const MotInstance& inst, double eta,
                           double epsPrime, std::size_t maxIter = 0);

}  // namespace mot
