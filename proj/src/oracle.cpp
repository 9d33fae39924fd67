#include "mot/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "mot/sinkhorn.hpp"

namespace mot {

StandardFormLP build_lp(const MotInstance& inst, std::size_t cap) {
  const std::size_t m = inst.m;
  const std::size_t n = inst.n;
  const std::size_t cols = inst.cost.data.size();
  if (cols > cap) throw std::length_error("instance exceeds the oracle cap");

  StandardFormLP lp;
  lp.cols = cols;
  lp.rows = m * (n - 1) + 1;
  lp.A.assign(lp.rows, Vec(cols, 0.0));
  lp.b.resize(lp.rows);
  lp.c = inst.cost.data;

  // Row layout: axis 1 contributes all n rows; axis k >= 2 contributes rows
  // j = 0..n-2 (the last one is implied by the others).
  std::size_t row = 0;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t stride = 1;
    for (std::size_t a = k + 1; a < m; ++a) stride *= n;
    const std::size_t period = stride * n;
    const std::size_t jmax = (k == 0) ? n : n - 1;
    for (std::size_t j = 0; j < jmax; ++j, ++row) {
      for (std::size_t idx = 0; idx < cols; ++idx)
        if ((idx % period) / stride == j) lp.A[row][idx] = 1.0;
      lp.b[row] = inst.marginals[k][j];
    }
  }
  return lp;
}

namespace {

constexpr double kTol = 1e-10;

// Bland pivoting on a dense tableau T ((rows+1) x (width+1)); the last row
// holds reduced costs, the last column the rhs. Returns false on pivot-budget
// exhaustion.
bool run_simplex(std::vector<Vec>& T, std::vector<std::size_t>& basis,
                 std::size_t width, std::size_t blockCols,
                 std::size_t& budget) {
  const std::size_t rows = basis.size();
  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < blockCols; ++j) {
      if (T[rows][j] < -kTol) {
        enter = j;
        break;
      }
    }
    if (enter == width) return true;  // optimal

    std::size_t leave = rows;
    double bestRatio = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (T[i][enter] > kTol) {
        const double ratio = T[i][width] / T[i][enter];
        if (leave == rows || ratio < bestRatio - kTol ||
            (ratio < bestRatio + kTol && basis[i] < basis[leave])) {
          leave = i;
          bestRatio = ratio;
        }
      }
    }
    if (leave == rows)
      throw std::runtime_error("LP is unbounded");  // impossible here

    if (budget-- == 0) return false;

    const double piv = T[leave][enter];
    for (std::size_t j = 0; j <= width; ++j) T[leave][j] /= piv;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == leave) continue;
      const double f = T[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= width; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
}

}  // namespace

LpSolution simplex_solve(const StandardFormLP& lp, std::size_t maxPivots) {
  const std::size_t rows = lp.rows;
  const std::size_t ncols = lp.cols;
  const std::size_t width = ncols + rows;  // structural + artificial

  // Phase 1 tableau: [A | I | b] with b made nonnegative, objective = sum of
  // artificials.
  std::vector<Vec> T(rows + 1, Vec(width + 1, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double sgn = lp.b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < ncols; ++j) T[i][j] = sgn * lp.A[i][j];
    T[i][ncols + i] = 1.0;
    T[i][width] = sgn * lp.b[i];
    basis[i] = ncols + i;
  }
  for (std::size_t j = 0; j <= width; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += T[i][j];
    T[rows][j] = -s;
  }
  for (std::size_t i = 0; i < rows; ++i) T[rows][ncols + i] = 0.0;

  LpSolution out;
  std::size_t budget = maxPivots;
  if (!run_simplex(T, basis, width, width, budget)) {
    out.status = LpStatus::Stalled;
  }
  if (-T[rows][width] > 1e-7) {
    out.status = LpStatus::Infeasible;
    return out;
  }

  // Drive basic artificials out; drop redundant rows as all-zero pivots.
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < ncols) continue;
    std::size_t piv = ncols;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (std::abs(T[i][j]) > kTol) {
        piv = j;
        break;
      }
    }
    if (piv == ncols) continue;  // redundant row; harmless to keep
    const double p = T[i][piv];
    for (std::size_t j = 0; j <= width; ++j) T[i][j] /= p;
    for (std::size_t r2 = 0; r2 <= rows; ++r2) {
      if (r2 == i) continue;
      const double f = T[r2][piv];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= width; ++j) T[r2][j] -= f * T[i][j];
    }
    basis[i] = piv;
  }

  // Phase 2 objective row.
  for (std::size_t j = 0; j <= width; ++j)
    T[rows][j] = (j < ncols) ? lp.c[j] : 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] >= ncols) continue;
    const double cb = lp.c[basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= width; ++j) T[rows][j] -= cb * T[i][j];
  }
  if (out.status == LpStatus::Optimal &&
      !run_simplex(T, basis, width, ncols, budget)) {
    out.status = LpStatus::Stalled;
  }

  out.x.assign(ncols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] < ncols) out.x[basis[i]] = T[i][width];
  out.value = 0.0;
  for (std::size_t j = 0; j < ncols; ++j) out.value += lp.c[j] * out.x[j];
  return out;
}

double lp_dual_optimum_phi(const MotInstance& inst, double eta) {
  // 1e-8 sits just above the double-precision floor of the residue; the
  // remaining optimum error is at most Rbar * 1e-8.
  SolveResult res = multi_sinkhorn(inst, eta, 1e-8, 1000000);
  if (!res.report.converged)
    throw std::runtime_error("reference solve did not converge");
  return res.report.finalPhi;
}

}  // namespace mot
