#include "mot/rounding.hpp"

#include <cmath>
#include <stdexcept>

namespace mot {

RoundResult round_to_polytope(const DenseTensor& X, const MarginalSet& r) {
  const std::size_t m = X.shape.axes();
  if (r.size() != m)
    throw std::invalid_argument("marginal count does not match tensor order");
  for (std::size_t k = 0; k < m; ++k) {
    if (r[k].size() != X.shape.sizes[k])
      throw std::invalid_argument("marginal length does not match axis size");
    double s = 0.0;
    for (double v : r[k]) {
      if (v < 0.0) throw std::invalid_argument("negative marginal entry");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw std::invalid_argument("marginal does not sum to 1");
  }
  for (double v : X.data)
    if (v < 0.0) throw std::invalid_argument("negative plan entry");
  if (norm1(X) > 1.0 + 1e-9)
    throw std::invalid_argument("plan mass exceeds 1");

  RoundResult out;
  out.plan = X;
  out.report.massRemoved.resize(m);
  out.report.errNorms.resize(m);
  DenseTensor& W = out.plan;

  // Phase k: scale slice i_k = j by z_j = min(1, r_k[j] / [r_k(W)]_j).
  for (std::size_t k = 0; k < m; ++k) {
    const Vec marg = marginal(W, k);
    const std::size_t n = marg.size();
    Vec z(n);
    for (std::size_t j = 0; j < n; ++j)
      z[j] = (marg[j] > 0.0) ? std::min(1.0, r[k][j] / marg[j]) : 1.0;
    std::size_t stride = 1;
    for (std::size_t a = k + 1; a < m; ++a) stride *= W.shape.sizes[a];
    const std::size_t period = stride * n;
    double removed = 0.0;
    for (std::size_t idx = 0; idx < W.data.size(); ++idx) {
      const double zj = z[(idx % period) / stride];
      const double before = W.data[idx];
      W.data[idx] = before * zj;
      removed += before - W.data[idx];
    }
    out.report.massRemoved[k] = removed;
  }

  // Deficits; analytically >= 0 with equal total mass across axes.
  std::vector<Vec> err(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Vec marg = marginal(W, k);
    err[k].resize(marg.size());
    double s = 0.0;
    for (std::size_t j = 0; j < marg.size(); ++j) {
      err[k][j] = std::max(0.0, r[k][j] - marg[j]);
      s += err[k][j];
    }
    out.report.errNorms[k] = s;
  }

  const double errTotal = out.report.errNorms[0];
  if (errTotal >= 1e-15) {
    out.report.correctionApplied = true;
    const double denom = std::pow(errTotal, static_cast<double>(m - 1));
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t flat = 0; flat < W.data.size(); ++flat) {
      double prod = 1.0;
      for (std::size_t k = 0; k < m; ++k) prod *= err[k][idx[k]];
      W.data[flat] += prod / denom;
      for (std::size_t k = m; k-- > 0;) {
        if (++idx[k] < W.shape.sizes[k]) break;
        idx[k] = 0;
      }
    }
  }

  double move = 0.0;
  for (std::size_t i = 0; i < W.data.size(); ++i) {
    move += std::abs(W.data[i] - X.data[i]);
    if (W.data[i] < 0.0) W.data[i] = 0.0;  // clamp -1e-15-scale noise
  }
  out.report.l1Move = move;
  return out;
}

}  // namespace mot
