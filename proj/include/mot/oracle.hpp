#pragma once

#include "mot/regmot.hpp"

namespace mot {

// Standard-form LP  min c'x  s.t.  Ax = b, x >= 0, built from an instance by
// flattening the plan row-major. Rows: all n marginal constraints of axis 1,
// then the first n-1 of each axis k >= 2 (the dropped rows are implied), for
// m(n-1)+1 independent rows in total.
struct StandardFormLP {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Vec> A;  // rows x cols
  Vec b;
  Vec c;
};

StandardFormLP build_lp(const MotInstance& inst, std::size_t cap = 4096);

enum class LpStatus { Optimal, Stalled, Infeasible };

struct LpSolution {
  double value = 0.0;
  Vec x;
  LpStatus status = LpStatus::Optimal;
};

// Primal simplex, two phases, Bland's anti-cycling rule, tolerance 1e-10.
LpSolution simplex_solve(const StandardFormLP& lp,
                         std::size_t maxPivots = 200000);

// Reference dual optimum: a long greedy solve down to residue 1e-8 (just
// above the double-precision floor); the returned value overestimates the
// true optimum by at most Rbar * 1e-8. Throws std::runtime_error if the
// solve does not converge.
double lp_dual_optimum_phi(const MotInstance& inst, double eta);

}  // namespace mot
