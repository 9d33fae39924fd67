#pragma once

#include <cstddef>
#include <string_view>

// Scalar reference kernels plus SIMD variants selected once at startup.
// Only order-insensitive reductions (max) are vectorized: they are bit-exact
// against the scalar reference, which keeps every result reproducible.
// Ordered accumulations (sums, log-sum-exp second passes) always run in the
// scalar sequential form.
namespace mot::kern {

// max_i |x[i]|; 0 for n == 0.
double max_abs(const double* x, std::size_t n);

// max_i x[i]; -inf for n == 0.
double max_val(const double* x, std::size_t n);

// max_i (base + b[i] - c[i]). The inner-loop shape of the log-domain
// marginal kernels: b is a potential vector, c a cost slice.
double max_shifted(double base, const double* b, const double* c,
                   std::size_t n);

// Active implementation name: "scalar", "avx2", or "neon".
std::string_view active_backend();

// Force the scalar reference path (used by equivalence tests). Returns the
// previously active backend name.
std::string_view force_scalar(bool on);

namespace detail {
double max_abs_scalar(const double* x, std::size_t n);
double max_val_scalar(const double* x, std::size_t n);
double max_shifted_scalar(double base, const double* b, const double* c,
                          std::size_t n);
}  // namespace detail

}  // namespace mot::kern
