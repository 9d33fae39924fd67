#include "mot/hardness.hpp"

#include <cmath>
#include <stdexcept>

namespace mot {

IntMatrix build_L(std::size_t n, std::size_t t, std::size_t cap) {
  if (n < 1 || t < 1) throw std::domain_error("need n >= 1 and t >= 1");
  double rowsEst = std::pow(static_cast<double>(n), static_cast<double>(t));
  if (rowsEst > static_cast<double>(cap))
    throw std::length_error("matrix exceeds the size cap");

  IntMatrix L(n, n);
  for (std::size_t i = 0; i < n; ++i) L.at(i, i) = 1;
  for (std::size_t s = 2; s <= t; ++s) {
    const std::size_t pr = L.rows;           // n^{s-1}
    IntMatrix next(pr * n, L.cols + n);
    // 1_n (x) L: stack n copies of L.
    for (std::size_t blk = 0; blk < n; ++blk)
      for (std::size_t i = 0; i < pr; ++i)
        for (std::size_t j = 0; j < L.cols; ++j)
          next.at(blk * pr + i, j) = L.at(i, j);
    // I_n (x) 1_{n^{s-1}}: block column of ones.
    for (std::size_t blk = 0; blk < n; ++blk)
      for (std::size_t i = 0; i < pr; ++i)
        next.at(blk * pr + i, L.cols + blk) = 1;
    L = std::move(next);
  }
  return L;
}

IntMatrix build_primal_constraints(std::size_t n, std::size_t m,
                                   std::size_t cap) {
  if (n < 1 || m < 1) throw std::domain_error("need n >= 1 and m >= 1");
  double colsEst = std::pow(static_cast<double>(n), static_cast<double>(m));
  if (colsEst > static_cast<double>(cap))
    throw std::length_error("matrix exceeds the size cap");
  const auto ncols = static_cast<std::size_t>(colsEst + 0.5);

  // Axis strides for row-major flat indices (last axis fastest).
  std::vector<std::size_t> stride(m, 1);
  for (std::size_t k = m; k-- > 1;) stride[k - 1] = stride[k] * n;

  // (axis, value) pairs in the fixed redundancy-free order.
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  if (m == 1) {
    for (std::size_t j = 0; j < n; ++j) rows.emplace_back(0, j);
  } else {
    for (std::size_t j = 0; j < n; ++j) rows.emplace_back(1, j);
    for (std::size_t k = 2; k < m; ++k)
      for (std::size_t j = 0; j + 1 < n; ++j) rows.emplace_back(k, j);
    for (std::size_t j = 0; j + 1 < n; ++j) rows.emplace_back(0, j);
  }

  IntMatrix A(rows.size(), ncols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto [k, j] = rows[r];
    for (std::size_t idx = 0; idx < ncols; ++idx)
      if ((idx / stride[k]) % n == j) A.at(r, idx) = 1;
  }
  return A;
}

namespace {

// Exact integer determinant, Bareiss fraction-free elimination.
std::int64_t int_det(std::vector<std::int64_t>& w, std::size_t k) {
  std::int64_t prev = 1;
  auto at = [&](std::size_t r, std::size_t c) -> std::int64_t& {
    return w[r * k + c];
  };
  for (std::size_t p = 0; p < k; ++p) {
    if (at(p, p) == 0) {
      std::size_t swap = k;
      for (std::size_t r = p + 1; r < k; ++r)
        if (at(r, p) != 0) {
          swap = r;
          break;
        }
      if (swap == k) return 0;
      for (std::size_t c = 0; c < k; ++c) std::swap(at(p, c), at(swap, c));
      for (std::size_t c = 0; c < k; ++c) at(swap, c) = -at(swap, c);
    }
    for (std::size_t r = p + 1; r < k; ++r) {
      for (std::size_t c = p + 1; c < k; ++c)
        at(r, c) = (at(r, c) * at(p, p) - at(r, p) * at(p, c)) / prev;
      at(r, p) = 0;
    }
    prev = at(p, p);
  }
  return at(k - 1, k - 1);
}

bool next_combination(std::vector<std::size_t>& comb, std::size_t limit) {
  const std::size_t k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] + (k - i) < limit) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> first_combination(std::size_t k) {
  std::vector<std::size_t> comb(k);
  for (std::size_t i = 0; i < k; ++i) comb[i] = i;
  return comb;
}

}  // namespace

TuResult tu_check(const IntMatrix& M, std::size_t maxOrder,
                  std::size_t budget, std::size_t minOrder) {
  for (int v : M.a)
    if (v < -1 || v > 1)
      throw std::invalid_argument("entries must be in {-1, 0, 1}");
  const std::size_t cap = std::min(M.rows, M.cols);
  if (maxOrder == 0 || maxOrder > cap) maxOrder = cap;
  if (minOrder < 1) minOrder = 1;

  TuResult out;
  std::vector<std::int64_t> w;
  for (std::size_t k = minOrder; k <= maxOrder; ++k) {
    w.resize(k * k);
    auto rowSel = first_combination(k);
    do {
      auto colSel = first_combination(k);
      do {
        if (out.partial) return out;
        if (budget-- == 0) {
          out.partial = true;
          return out;
        }
        for (std::size_t r = 0; r < k; ++r)
          for (std::size_t c = 0; c < k; ++c)
            w[r * k + c] = M.at(rowSel[r], colSel[c]);
        const std::int64_t d = int_det(w, k);
        if (d <= -2 || d >= 2) {
          TuWitness wit;
          wit.det = d;
          for (std::size_t r : rowSel) wit.rowIdx.push_back(r + 1);
          for (std::size_t c : colSel) wit.colIdx.push_back(c + 1);
          out.witness = std::move(wit);
          out.maxOrderChecked = k;
          return out;
        }
      } while (next_combination(colSel, M.cols));
    } while (next_combination(rowSel, M.rows));
    out.maxOrderChecked = k;
  }
  out.isTU = true;
  return out;
}

std::int64_t submatrix_det(const IntMatrix& M,
                           const std::vector<std::size_t>& rows1,
                           const std::vector<std::size_t>& cols1) {
  if (rows1.size() != cols1.size())
    throw std::invalid_argument("submatrix must be square");
  const std::size_t k = rows1.size();
  std::vector<std::int64_t> w(k * k);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      if (rows1[r] < 1 || rows1[r] > M.rows || cols1[c] < 1 ||
          cols1[c] > M.cols)
        throw std::out_of_range("submatrix index out of range");
      w[r * k + c] = M.at(rows1[r] - 1, cols1[c] - 1);
    }
  return int_det(w, k);
}

bool sufficient_tu(const IntMatrix& M) {
  for (int v : M.a)
    if (v < -1 || v > 1) return false;
  for (std::size_t c = 0; c < M.cols; ++c) {
    std::size_t nz = 0;
    for (std::size_t r = 0; r < M.rows; ++r) nz += (M.at(r, c) != 0);
    if (nz > 2) return false;
  }

  // Parity union-find: columns with two equal-sign nonzeros force their rows
  // into different sets, opposite signs into the same set.
  std::vector<std::size_t> parent(M.rows);
  std::vector<unsigned char> parity(M.rows, 0);
  for (std::size_t i = 0; i < M.rows; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    unsigned char p = 0;
    while (parent[x] != x) {
      p ^= parity[x];
      x = parent[x];
    }
    return std::pair<std::size_t, unsigned char>(x, p);
  };
  for (std::size_t c = 0; c < M.cols; ++c) {
    std::size_t r1 = M.rows, r2 = M.rows;
    for (std::size_t r = 0; r < M.rows; ++r) {
      if (M.at(r, c) == 0) continue;
      (r1 == M.rows ? r1 : r2) = r;
    }
    if (r2 == M.rows) continue;
    const unsigned char want =
        (M.at(r1, c) == M.at(r2, c)) ? 1 : 0;  // same sign -> different sets
    auto [a, pa] = find(r1);
    auto [b, pb] = find(r2);
    if (a == b) {
      if ((pa ^ pb) != want) return false;
    } else {
      parent[a] = b;
      parity[a] = pa ^ pb ^ want;
    }
  }
  return true;
}

}  // namespace mot
