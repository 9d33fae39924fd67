#include "mot/regmot.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mot/kernels.hpp"

namespace mot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool advance_row(std::vector<std::size_t>& idx, const Shape& s) {
  const std::size_t m = s.axes();
  for (std::size_t l = m - 1; l-- > 0;) {
    if (++idx[l] < s.sizes[l]) return true;
    idx[l] = 0;
  }
  return false;
}

double min_marginal_entry(const MarginalSet& r) {
  double mn = std::numeric_limits<double>::infinity();
  for (const Vec& rk : r)
    for (double v : rk) mn = std::min(mn, v);
  return mn;
}

}  // namespace

MotInstance::MotInstance(DenseTensor c, MarginalSet r)
    : cost(std::move(c)), marginals(std::move(r)) {
  m = cost.shape.axes();
  n = cost.shape.sizes[0];
  for (std::size_t nk : cost.shape.sizes)
    if (nk != n)
      throw std::invalid_argument("solver instances require equal axis sizes");
  if (marginals.size() != m)
    throw std::invalid_argument("need one marginal per axis");
  for (const Vec& rk : marginals) {
    if (rk.size() != n) throw std::invalid_argument("marginal length mismatch");
    double sum = 0.0;
    for (double v : rk) {
      if (v < 0.0) throw std::invalid_argument("marginal entries must be >= 0");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("marginal must sum to 1");
  }
  for (double v : cost.data)
    if (v < 0.0) throw std::invalid_argument("cost entries must be >= 0");
  costInf = normInf(cost);
}

SolverBounds bounds(const MotInstance& inst, double eta) {
  if (eta <= 0.0) throw std::domain_error("eta must be > 0");
  const double mn = min_marginal_entry(inst.marginals);
  if (mn <= 0.0)
    throw std::domain_error(
        "bounds need strictly positive marginals; smooth them first "
        "(driver smoothing)");
  SolverBounds b;
  b.eta = eta;
  const double logmin = std::log(mn);
  b.R = inst.costInf / eta +
        static_cast<double>(inst.m - 1) * std::log(static_cast<double>(inst.n)) -
        2.0 * logmin;
  b.Rbar = inst.costInf / eta - logmin;
  return b;
}

double rho(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rho length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] <= 0.0) throw std::domain_error("rho: b entries must be > 0");
    s += b[i] - a[i];
    if (a[i] > 0.0) s += a[i] * std::log(a[i] / b[i]);
  }
  return s;
}

DenseTensor scaled_cost(const MotInstance& inst, double eta) {
  if (eta <= 0.0) throw std::domain_error("eta must be > 0");
  DenseTensor out(inst.cost.shape);
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = inst.cost.data[i] / eta;
  return out;
}

Vec LogMarginals::normalized(std::size_t k) const {
  Vec out(logm[k].size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = norm_marg(k, j);
  return out;
}

LogMarginals all_log_marginals(const Potentials& beta,
                               const DenseTensor& scaledCost) {
  LogMarginals lm;
  const std::size_t m = scaledCost.shape.axes();
  lm.logm.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    lm.logm[k] = lse_marginal(beta, scaledCost, k);
  lm.logNorm = lse(lm.logm[0]);
  return lm;
}

LogMarginals collapsed_log_marginals(const Potentials& beta,
                                     const DenseTensor& scaledCost,
                                     std::size_t fixedAxis,
                                     const Vec& fixedMarg) {
  const Shape& sh = scaledCost.shape;
  const std::size_t m = sh.axes();
  if (fixedAxis >= m) throw std::out_of_range("axis out of range");
  if (m == 1) return all_log_marginals(beta, scaledCost);

  // Collapse fixedAxis in the log domain: logA = LSE over i_K of log B.
  std::vector<std::size_t> csizes;
  for (std::size_t l = 0; l < m; ++l)
    if (l != fixedAxis) csizes.push_back(sh.sizes[l]);
  const Shape cshape{Shape(csizes)};
  const std::size_t ccount = cshape.count();
  // collapsed strides per original axis (fixedAxis unused)
  std::vector<std::size_t> cstride(m, 0);
  {
    std::size_t s = 1;
    for (std::size_t l = m; l-- > 0;) {
      if (l == fixedAxis) continue;
      cstride[l] = s;
      s *= sh.sizes[l];
    }
  }

  const std::size_t last = m - 1;
  const std::size_t nlast = sh.sizes[last];
  const double* blast = beta[last].data();
  Vec cmax(ccount, kNegInf), csum(ccount, 0.0);

  for (int pass = 0; pass < 2; ++pass) {
    std::vector<std::size_t> idx(m, 0);
    std::size_t off = 0;
    do {
      double base = 0.0;
      std::size_t cbase = 0;
      for (std::size_t l = 0; l < last; ++l) {
        base += beta[l][idx[l]];
        if (l != fixedAxis) cbase += idx[l] * cstride[l];
      }
      const double* c = scaledCost.data.data() + off;
      if (fixedAxis == last) {
        if (pass == 0) {
          cmax[cbase] = std::max(cmax[cbase],
                                 kern::max_shifted(base, blast, c, nlast));
        } else if (cmax[cbase] != kNegInf) {
          double s = 0.0;
          const double shift = base - cmax[cbase];
          for (std::size_t i = 0; i < nlast; ++i)
            s += std::exp(shift + blast[i] - c[i]);
          csum[cbase] += s;
        }
      } else {
        for (std::size_t i = 0; i < nlast; ++i) {
          const std::size_t cf = cbase + i;
          const double v = base + blast[i] - c[i];
          if (pass == 0) {
            cmax[cf] = std::max(cmax[cf], v);
          } else if (cmax[cf] != kNegInf) {
            csum[cf] += std::exp(v - cmax[cf]);
          }
        }
      }
      off += nlast;
    } while (advance_row(idx, sh));
  }

  DenseTensor negLogA(cshape);
  for (std::size_t i = 0; i < ccount; ++i)
    negLogA.data[i] =
        cmax[i] == kNegInf ? std::numeric_limits<double>::infinity()
                           : -(cmax[i] + std::log(csum[i]));

  LogMarginals lm;
  lm.logm.resize(m);
  Potentials zeroes(m - 1);
  for (std::size_t l = 0; l < m - 1; ++l)
    zeroes[l].assign(cshape.sizes[l], 0.0);
  std::size_t taken = 0;
  for (std::size_t l = 0; l < m; ++l) {
    if (l == fixedAxis) continue;
    lm.logm[l] = lse_marginal(zeroes, negLogA, taken);
    ++taken;
  }
  const std::size_t anyOther = fixedAxis == 0 ? 1 : 0;
  lm.logNorm = lse(lm.logm[anyOther]);
  lm.logm[fixedAxis].assign(sh.sizes[fixedAxis], kNegInf);
  for (std::size_t j = 0; j < sh.sizes[fixedAxis]; ++j)
    if (fixedMarg[j] > 0.0)
      lm.logm[fixedAxis][j] = std::log(fixedMarg[j]) + lm.logNorm;
  return lm;
}

double phi_from(const LogMarginals& lm, const MotInstance& inst,
                const Potentials& beta) {
  double linear = 0.0;
  for (std::size_t k = 0; k < inst.m; ++k)
    for (std::size_t j = 0; j < inst.n; ++j)
      linear += beta[k][j] * inst.marginals[k][j];
  return lm.logNorm - linear;
}

double phi(const MotInstance& inst, double eta, const Potentials& beta) {
  const DenseTensor sc = scaled_cost(inst, eta);
  double linear = 0.0;
  for (std::size_t k = 0; k < inst.m; ++k)
    for (std::size_t j = 0; j < inst.n; ++j)
      linear += beta[k][j] * inst.marginals[k][j];
  return lse_total(beta, sc) - linear;
}

Potentials grad_phi(const MotInstance& inst, double eta,
                    const Potentials& beta) {
  const DenseTensor sc = scaled_cost(inst, eta);
  const LogMarginals lm = all_log_marginals(beta, sc);
  Potentials g(inst.m);
  for (std::size_t k = 0; k < inst.m; ++k) {
    g[k].resize(inst.n);
    for (std::size_t j = 0; j < inst.n; ++j)
      g[k][j] = lm.norm_marg(k, j) - inst.marginals[k][j];
  }
  return g;
}

Residue residue_from(const LogMarginals& lm, const MarginalSet& r) {
  Residue res;
  const std::size_t m = r.size();
  res.perAxis.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < r[k].size(); ++j)
      s += std::fabs(lm.norm_marg(k, j) - r[k][j]);
    res.perAxis[k] = s;
    res.total += s;
  }
  return res;
}

Residue residue(const MotInstance& inst, double eta, const Potentials& beta) {
  const DenseTensor sc = scaled_cost(inst, eta);
  return residue_from(all_log_marginals(beta, sc), inst.marginals);
}

Potentials zero_potentials(std::size_t m, std::size_t n) {
  Potentials beta(m);
  for (Vec& v : beta) v.assign(n, 0.0);
  return beta;
}

}  // namespace mot
