#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mot/regmot.hpp"

namespace mot {

// One recorded iterate of a solver run.
struct TraceRow {
  std::size_t t = 0;
  double E = 0.0;
  double phi = 0.0;
  int axis = -1;          // greedy axis chosen at this iterate (-1: none)
  Vec rhoPerAxis;         // rho(r_k, normalized marginal), per axis
  double theta = 0.0;     // accelerated solver only
  bool hasTheta = false;
};

struct SolveReport {
  std::string solver;     // "greedy" or "accelerated"
  bool converged = false;
  std::size_t iterations = 0;
  double finalE = 0.0;
  double finalPhi = 0.0;
  double epsPrime = 0.0;
  std::size_t maxIter = 0;
  SolverBounds bnds;
  std::vector<TraceRow> trace;

  // CSV with columns t,E,phi,axis[,theta]; 17 significant digits.
  std::string trace_csv() const;
};

struct SolveResult {
  Potentials beta;
  SolveReport report;
};

}  // namespace mot
