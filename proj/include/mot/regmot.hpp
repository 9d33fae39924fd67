#pragma once

#include <cmath>
#include <cstddef>

#include "mot/tensor.hpp"

namespace mot {

using MarginalSet = std::vector<Vec>;

// A multimarginal transport instance: nonnegative cost tensor with m equal
// axes of size n, and one probability vector per axis.
struct MotInstance {
  DenseTensor cost;
  MarginalSet marginals;
  std::size_t m = 0;
  std::size_t n = 0;
  double costInf = 0.0;  // cached ||C||_inf

  MotInstance() = default;
  MotInstance(DenseTensor c, MarginalSet r);
};

// A-priori bounds on the dual problem (finite iff all marginal entries > 0):
//   R    = ||C||_inf/eta + (m-1) log n - 2 log(min_ij r_ij)
//   Rbar = ||C||_inf/eta -   log(min_ij r_ij)
struct SolverBounds {
  double R = 0.0;
  double Rbar = 0.0;
  double eta = 0.0;
};

SolverBounds bounds(const MotInstance& inst, double eta);

// rho(a, b) = 1'(b - a) + sum_i a_i log(a_i / b_i); the greedy selection
// divergence. 0 log 0 = 0; any b_i <= 0 is a domain error.
double rho(const Vec& a, const Vec& b);

DenseTensor scaled_cost(const MotInstance& inst, double eta);  // C / eta

// All m log-marginals of B(beta) plus log ||B||_1 in one bundle.
struct LogMarginals {
  std::vector<Vec> logm;  // logm[k][j] = log [r_k(B)]_j
  double logNorm = 0.0;   // log ||B||_1

  // [r_k(B)/||B||_1]_j
  double norm_marg(std::size_t k, std::size_t j) const {
    return std::exp(logm[k][j] - logNorm);
  }
  Vec normalized(std::size_t k) const;
};

LogMarginals all_log_marginals(const Potentials& beta,
                               const DenseTensor& scaledCost);

// Same values via the cheaper route available right after a coordinate
// update of `fixedAxis`: collapse that axis once (O(n^m)), read the other
// marginals off the collapsed tensor (O(m n^{m-1})), and reconstruct the
// fixed axis from the enforced marginal fixedMarg = r_K.
LogMarginals collapsed_log_marginals(const Potentials& beta,
                                     const DenseTensor& scaledCost,
                                     std::size_t fixedAxis,
                                     const Vec& fixedMarg);

// Dual objective phi(beta) = log ||B(beta)||_1 - sum_k beta_k' r_k.
double phi(const MotInstance& inst, double eta, const Potentials& beta);
double phi_from(const LogMarginals& lm, const MotInstance& inst,
                const Potentials& beta);

// Gradient: component k = r_k(B)/||B||_1 - r_k. Each component sums to 0.
Potentials grad_phi(const MotInstance& inst, double eta,
                    const Potentials& beta);

// Residue E and its per-axis parts ||r_k(B)/||B||_1 - r_k||_1.
struct Residue {
  double total = 0.0;
  Vec perAxis;
};

Residue residue(const MotInstance& inst, double eta, const Potentials& beta);
Residue residue_from(const LogMarginals& lm, const MarginalSet& r);

Potentials zero_potentials(std::size_t m, std::size_t n);

}  // namespace mot
