#include "mot/sinkhorn.hpp"

#include <cmath>
#include <stdexcept>

namespace mot {

std::size_t greedy_axis(const MarginalSet& r, const LogMarginals& lm) {
  std::size_t best = 0;
  double bestVal = -1.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double v = rho(r[k], lm.normalized(k));
    if (v > bestVal) {
      bestVal = v;
      best = k;
    }
  }
  return best;
}

void coordinate_update(Potentials& beta, std::size_t K, const Vec& rK,
                       const LogMarginals& lm) {
  for (std::size_t j = 0; j < rK.size(); ++j)
    beta[K][j] += std::log(rK[j]) - (lm.logm[K][j] - lm.logNorm);
}

std::size_t default_greedy_max_iter(const SolverBounds& b, std::size_t m,
                                    double epsPrime) {
  const double raw =
      2.0 + 2.0 * static_cast<double>(m * m) * b.Rbar / epsPrime;
  return static_cast<std::size_t>(std::ceil(raw)) + 10;
}

SolveResult multi_sinkhorn(const MotInstance& inst, double eta,
                           double epsPrime, std::size_t maxIter) {
  if (eta <= 0.0) throw std::domain_error("eta must be > 0");
  if (epsPrime <= 0.0) throw std::domain_error("epsPrime must be > 0");
  const SolverBounds bnds = bounds(inst, eta);  // also rejects zero marginals
  if (maxIter == 0) maxIter = default_greedy_max_iter(bnds, inst.m, epsPrime);

  const DenseTensor sc = scaled_cost(inst, eta);
  const MarginalSet& r = inst.marginals;

  SolveResult out;
  out.report.solver = "greedy";
  out.report.epsPrime = epsPrime;
  out.report.maxIter = maxIter;
  out.report.bnds = bnds;

  Potentials beta = zero_potentials(inst.m, inst.n);
  LogMarginals lm = all_log_marginals(beta, sc);
  // Normalize ||B||_1 to 1 at t = 0: a uniform shift of beta_1 only.
  {
    const double c = lm.logNorm;
    for (double& v : beta[0]) v -= c;
    for (Vec& lv : lm.logm)
      for (double& v : lv) v -= c;
    lm.logNorm = 0.0;
  }

  std::size_t t = 0;
  while (true) {
    TraceRow row;
    row.t = t;
    const Residue res = residue_from(lm, r);
    row.E = res.total;
    row.phi = phi_from(lm, inst, beta);
    row.rhoPerAxis.resize(inst.m);
    for (std::size_t k = 0; k < inst.m; ++k)
      row.rhoPerAxis[k] = rho(r[k], lm.normalized(k));

    if (res.total <= epsPrime) {
      out.report.trace.push_back(row);
      out.report.converged = true;
      break;
    }
    if (t >= maxIter) {
      out.report.trace.push_back(row);
      out.report.converged = false;
      break;
    }

    const std::size_t K = greedy_axis(r, lm);
    row.axis = static_cast<int>(K);
    out.report.trace.push_back(row);

    coordinate_update(beta, K, r[K], lm);
    lm = collapsed_log_marginals(beta, sc, K, r[K]);
    ++t;
  }

  out.report.iterations = t;
  out.report.finalE = out.report.trace.back().E;
  out.report.finalPhi = out.report.trace.back().phi;
  out.beta = std::move(beta);
  return out;
}

}  // namespace mot
