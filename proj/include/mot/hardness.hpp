#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace mot {

struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<int> a;  // row-major

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  int& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  int at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
  bool operator==(const IntMatrix&) const = default;
};

// L_{n,1} = I_n;  L_{n,t} = [ 1_n (x) L_{n,t-1} | I_n (x) 1_{n^{t-1}} ].
// Shape n^t x (n t). Size-capped on the row count.
IntMatrix build_L(std::size_t n, std::size_t t, std::size_t cap = 1u << 20);

// Effective marginal-constraint matrix of the order-m size-n plan polytope:
// indicator rows over flat plan indices (row-major, last axis fastest), with
// the redundant rows removed. Row order: axis 2 in full, then axes 3..m with
// the last row of each dropped, then axis 1 with its last row dropped. Shape
// (mn - m + 1) x n^m; reproduces the known non-TU witness at (n,m) = (2,3).
IntMatrix build_primal_constraints(std::size_t n, std::size_t m,
                                   std::size_t cap = 1u << 20);

struct TuWitness {
  std::vector<std::size_t> rowIdx;  // 1-based
  std::vector<std::size_t> colIdx;  // 1-based
  std::int64_t det = 0;
};

struct TuResult {
  bool isTU = false;          // no witness found within the checked range
  bool partial = false;       // budget ran out before the range was covered
  std::size_t maxOrderChecked = 0;
  std::optional<TuWitness> witness;  // lexicographically first, if any
};

// Exhaustive submatrix-determinant enumeration (exact integer arithmetic,
// fraction-free elimination) for orders minOrder..maxOrder (0: min(rows,
// cols)). The budget caps the number of determinant evaluations; the first
// witness in (order, rows, cols) lexicographic order is reported.
TuResult tu_check(const IntMatrix& M, std::size_t maxOrder = 0,
                  std::size_t budget = 5000000, std::size_t minOrder = 1);

// Exact determinant of the submatrix at the given 1-based rows/columns.
std::int64_t submatrix_det(const IntMatrix& M,
                           const std::vector<std::size_t>& rows1,
                           const std::vector<std::size_t>& cols1);

// Sufficient condition: entries in {-1,0,1}, at most two nonzeros per
// column, and a two-set row partition separating equal-sign column pairs and
// joining opposite-sign ones. true implies the matrix is TU.
bool sufficient_tu(const IntMatrix& M);

}  // namespace mot
