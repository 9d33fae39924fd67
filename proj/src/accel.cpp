#include "mot/accel.hpp"

#include <cmath>
#include <stdexcept>

#include "mot/sinkhorn.hpp"

namespace mot {

namespace {

double linear_term(const Potentials& beta, const MarginalSet& r) {
  double s = 0.0;
  for (std::size_t k = 0; k < beta.size(); ++k)
    for (std::size_t j = 0; j < beta[k].size(); ++j)
      s += beta[k][j] * r[k][j];
  return s;
}

double phi_at(const Potentials& beta, const DenseTensor& sc,
              const MarginalSet& r) {
  return lse_total(beta, sc) - linear_term(beta, r);
}

}  // namespace

double next_theta(double theta) {
  if (theta <= 0.0 || theta > 1.0)
    throw std::domain_error("theta must be in (0, 1]");
  return theta * (std::sqrt(theta * theta + 4.0) - theta) / 2.0;
}

std::size_t default_accel_max_iter(const SolverBounds& b, std::size_t m,
                                   std::size_t n, double epsPrime) {
  const double arg = std::sqrt(static_cast<double>(n)) *
                     static_cast<double>(m * m) * b.R / epsPrime;
  return static_cast<std::size_t>(std::ceil(1.0 + 4.0 * std::cbrt(arg * arg))) +
         10;
}

AccelStepInfo accel_step(const MotInstance& inst, const DenseTensor& sc,
                         AccelState& st) {
  const MarginalSet& r = inst.marginals;
  const std::size_t m = inst.m;
  const std::size_t n = inst.n;
  const double theta = st.theta;
  AccelStepInfo info;

  // Step 1: interpolation point.
  Potentials bar(m);
  for (std::size_t k = 0; k < m; ++k) {
    bar[k].resize(n);
    for (std::size_t j = 0; j < n; ++j)
      bar[k][j] = (1.0 - theta) * st.checkBeta[k][j] + theta * st.tildeBeta[k][j];
  }

  // Step 2: full-gradient update of the estimate-sequence iterate.
  const LogMarginals lmBar = all_log_marginals(bar, sc);
  Potentials tildeNext(m);
  const double scale = 1.0 / (static_cast<double>(m) * theta);
  for (std::size_t k = 0; k < m; ++k) {
    tildeNext[k].resize(n);
    for (std::size_t j = 0; j < n; ++j)
      tildeNext[k][j] =
          st.tildeBeta[k][j] - scale * (lmBar.norm_marg(k, j) - r[k][j]);
  }

  // Step 3: look-ahead point.
  Potentials grave(m);
  for (std::size_t k = 0; k < m; ++k) {
    grave[k].resize(n);
    for (std::size_t j = 0; j < n; ++j)
      grave[k][j] = bar[k][j] + theta * (tildeNext[k][j] - st.tildeBeta[k][j]);
  }

  // Step 4: coordinate correction of the carried axis K.
  const Vec lmGraveK = lse_marginal(grave, sc, st.K);
  const double logNormGrave = lse(lmGraveK);
  info.phiGrave = logNormGrave - linear_term(grave, r);
  Potentials hat = grave;
  for (std::size_t j = 0; j < n; ++j)
    hat[st.K][j] += std::log(r[st.K][j]) - (lmGraveK[j] - logNormGrave);
  info.phiHat = phi_at(hat, sc, r);

  // Step 5: monotone search.
  const double phiCheck = phi_at(st.checkBeta, sc, r);
  const bool takeHat = info.phiHat <= phiCheck;
  info.betaT = takeHat ? hat : st.checkBeta;
  info.phiBetaT = takeHat ? info.phiHat : phiCheck;

  // Step 6: greedy coordinate at beta^t.
  const LogMarginals lmT = all_log_marginals(info.betaT, sc);
  info.rhoPerAxis.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    info.rhoPerAxis[k] = rho(r[k], lmT.normalized(k));
  info.E = residue_from(lmT, r).total;
  const std::size_t Knext = greedy_axis(r, lmT);

  // Step 7: greedy coordinate descent step.
  Potentials checkNext = info.betaT;
  coordinate_update(checkNext, Knext, r[Knext], lmT);
  info.phiCheckNext = phi_at(checkNext, sc, r);

  // Step 8-9.
  st.checkBeta = std::move(checkNext);
  st.tildeBeta = std::move(tildeNext);
  st.K = Knext;
  st.theta = next_theta(theta);
  ++st.t;
  return info;
}

SolveResult accelerated_multi_sinkhorn(const MotInstance& inst, double eta,
                                       double epsPrime, std::size_t maxIter) {
  if (eta <= 0.0) throw std::domain_error("eta must be > 0");
  if (epsPrime <= 0.0) throw std::domain_error("epsPrime must be > 0");
  const SolverBounds bnds = bounds(inst, eta);
  if (maxIter == 0)
    maxIter = default_accel_max_iter(bnds, inst.m, inst.n, epsPrime);

  const DenseTensor sc = scaled_cost(inst, eta);
  const MarginalSet& r = inst.marginals;

  SolveResult out;
  out.report.solver = "accelerated";
  out.report.epsPrime = epsPrime;
  out.report.maxIter = maxIter;
  out.report.bnds = bnds;

  AccelState st;
  st.checkBeta = zero_potentials(inst.m, inst.n);
  st.tildeBeta = zero_potentials(inst.m, inst.n);
  st.theta = 1.0;
  st.K = 0;

  // Normalize ||B||_1 at the start (uniform shift of the first block of
  // both sequences; a pure constant shift of the whole trajectory).
  {
    const double c = lse_total(st.checkBeta, sc);
    for (double& v : st.checkBeta[0]) v -= c;
    for (double& v : st.tildeBeta[0]) v -= c;
  }

  // Initial residue check (t = 0).
  {
    const LogMarginals lm0 = all_log_marginals(st.checkBeta, sc);
    TraceRow row;
    row.t = 0;
    row.E = residue_from(lm0, r).total;
    row.phi = phi_from(lm0, inst, st.checkBeta);
    row.theta = st.theta;
    row.hasTheta = true;
    row.rhoPerAxis.resize(inst.m);
    for (std::size_t k = 0; k < inst.m; ++k)
      row.rhoPerAxis[k] = rho(r[k], lm0.normalized(k));
    out.report.trace.push_back(row);
    if (row.E <= epsPrime) {
      out.report.converged = true;
      out.report.iterations = 0;
      out.report.finalE = row.E;
      out.report.finalPhi = row.phi;
      out.beta = st.checkBeta;
      return out;
    }
  }

  while (true) {
    const double thetaUsed = st.theta;
    AccelStepInfo info = accel_step(inst, sc, st);
    TraceRow row;
    row.t = st.t;
    row.E = info.E;
    row.phi = info.phiBetaT;
    row.axis = static_cast<int>(st.K);
    row.theta = thetaUsed;
    row.hasTheta = true;
    row.rhoPerAxis = info.rhoPerAxis;
    out.report.trace.push_back(row);

    if (info.E <= epsPrime) {
      out.report.converged = true;
      out.report.iterations = st.t;
      out.report.finalE = info.E;
      out.report.finalPhi = info.phiBetaT;
      out.beta = std::move(info.betaT);
      return out;
    }
    if (st.t >= maxIter) {
      out.report.converged = false;
      out.report.iterations = st.t;
      out.report.finalE = info.E;
      out.report.finalPhi = info.phiBetaT;
      out.beta = std::move(info.betaT);
      return out;
    }
  }
}

}  // namespace mot
