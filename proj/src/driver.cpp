#include "mot/driver.hpp"

#include <cmath>
#include <stdexcept>

#include "mot/accel.hpp"
#include "mot/sinkhorn.hpp"

namespace mot {

MarginalSet smooth_marginals(const MarginalSet& r, double epsPrime,
                             std::size_t m, std::size_t n) {
  if (epsPrime <= 0.0 || epsPrime > 1.0)
    throw std::domain_error("epsPrime must be in (0, 1]");
  const double a = epsPrime / (4.0 * static_cast<double>(m));
  const double floor = a / static_cast<double>(n);
  MarginalSet out(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    out[k].resize(r[k].size());
    for (std::size_t j = 0; j < r[k].size(); ++j)
      out[k][j] = (1.0 - a) * r[k][j] + floor;
  }
  return out;
}

ApproxResult approx_mot(const MotInstance& inst, const ApproxConfig& cfg) {
  if (cfg.epsilon <= 0.0) throw std::domain_error("epsilon must be > 0");
  if (inst.n < 2) throw std::domain_error("axis size must be >= 2");
  if (inst.cost.data.size() > cfg.materializeCap)
    throw std::length_error("plan too large to materialize");

  ApproxResult out;
  const double logn = std::log(static_cast<double>(inst.n));
  out.eta = cfg.etaOverride > 0.0
                ? cfg.etaOverride
                : cfg.epsilon / (2.0 * static_cast<double>(inst.m) * logn);
  if (cfg.epsPrimeOverride > 0.0) {
    out.epsPrime = cfg.epsPrimeOverride;
  } else if (inst.costInf == 0.0) {
    out.epsPrime = 1.0;  // cost is identically zero; any feasible plan works
  } else {
    out.epsPrime = std::min(1.0, cfg.epsilon / (8.0 * inst.costInf));
  }

  out.smoothed = smooth_marginals(inst.marginals, out.epsPrime, inst.m, inst.n);
  MotInstance smoothedInst(inst.cost, out.smoothed);

  SolveResult sol =
      cfg.solver == SolverKind::Greedy
          ? multi_sinkhorn(smoothedInst, out.eta, out.epsPrime / 2.0,
                           cfg.maxIter)
          : accelerated_multi_sinkhorn(smoothedInst, out.eta,
                                       out.epsPrime / 2.0, cfg.maxIter);
  out.report = sol.report;
  if (!sol.report.converged)
    throw std::runtime_error("solver did not reach the target residue in " +
                             std::to_string(sol.report.iterations) +
                             " iterations");

  const DenseTensor sc = scaled_cost(inst, out.eta);
  const double shift = lse_total(sol.beta, sc);
  DenseTensor plan = materialize(sol.beta, sc, shift);
  out.preRoundObjective = inner(inst.cost, plan);

  const MarginalSet& target = cfg.roundTarget == RoundTarget::Original
                                  ? inst.marginals
                                  : out.smoothed;
  RoundResult rr = round_to_polytope(plan, target);
  out.plan = std::move(rr.plan);
  out.roundingReport = rr.report;
  out.objective = inner(inst.cost, out.plan);
  return out;
}

}  // namespace mot
