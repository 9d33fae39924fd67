#pragma once

#include "mot/report.hpp"

namespace mot {

// theta_{t+1} = theta_t (sqrt(theta_t^2 + 4) - theta_t) / 2; satisfies
// (theta_{t+1}/theta_t)^2 = 1 - theta_{t+1} and theta_t <= 2/(t+2).
double next_theta(double theta);

// Working state of the accelerated solver, exposed so single steps can be
// traced and checked against a straight-line re-implementation.
struct AccelState {
  Potentials checkBeta;  // monotone iterate
  Potentials tildeBeta;  // estimate-sequence iterate
  double theta = 1.0;
  std::size_t K = 0;     // coordinate carried from the previous iteration
  std::size_t t = 0;
};

// Diagnostics of one full step (the intermediate objective values obey
// phi(checkBeta') <= phi(betaT) <= phi(hatBeta) <= phi(graveBeta)).
struct AccelStepInfo {
  Potentials betaT;      // monotone-search point beta^t
  double phiGrave = 0.0;
  double phiHat = 0.0;
  double phiBetaT = 0.0;
  double phiCheckNext = 0.0;
  double E = 0.0;        // residue at beta^t
  Vec rhoPerAxis;        // at beta^t
};

AccelStepInfo accel_step(const MotInstance& inst, const DenseTensor& scaledCost,
                         AccelState& st);

// Default iteration cap from the proof-side bound 1 + 4 (sqrt(n) m^2 R /
// epsPrime)^{2/3}, plus slack 10.
std::size_t default_accel_max_iter(const SolverBounds& b, std::size_t m,
                                   std::size_t n, double epsPrime);

// Accelerated multimarginal Sinkhorn: estimate sequence + full-gradient
// step + coordinate correction + monotone search + greedy coordinate step.
SolveResult accelerated_multi_sinkhorn(const MotInstance& inst, double eta,
                                       double epsPrime,
                                       std::size_t maxIter = 0);

}  // namespace mot
