#include "mot/kernels.hpp"

#include <cmath>
#include <limits>

#if defined(__x86_64__) || defined(_M_X64)
#define MOT_X86 1
#include <immintrin.h>
#elif defined(__aarch64__)
#define MOT_NEON 1
#include <arm_neon.h>
#endif

namespace mot::kern {

namespace detail {

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

double max_val_scalar(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

double max_shifted_scalar(double base, const double* b, const double* c,
                          std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, base + b[i] - c[i]);
  return m;
}

}  // namespace detail

#ifdef MOT_X86

__attribute__((target("avx2"))) static double max_abs_avx2(const double* x,
                                                           std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i));
    acc = _mm256_max_pd(acc, v);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

__attribute__((target("avx2"))) static double max_val_avx2(const double* x,
                                                           std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  __m256d acc = _mm256_set1_pd(m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

__attribute__((target("avx2"))) static double max_shifted_avx2(
    double base, const double* b, const double* c, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  const __m256d vbase = _mm256_set1_pd(base);
  __m256d acc = _mm256_set1_pd(m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // Same association as the scalar path: (base + b) - c.
    __m256d v = _mm256_sub_pd(_mm256_add_pd(vbase, _mm256_loadu_pd(b + i)),
                              _mm256_loadu_pd(c + i));
    acc = _mm256_max_pd(acc, v);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, base + b[i] - c[i]);
  return m;
}

#endif  // MOT_X86

#ifdef MOT_NEON

static double max_abs_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double m = std::max(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

static double max_val_neon(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  float64x2_t acc = vdupq_n_f64(m);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(x + i));
  m = std::max(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  for (; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

static double max_shifted_neon(double base, const double* b, const double* c,
                               std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  const float64x2_t vbase = vdupq_n_f64(base);
  float64x2_t acc = vdupq_n_f64(m);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // Same association as the scalar path: (base + b) - c.
    float64x2_t v =
        vsubq_f64(vaddq_f64(vbase, vld1q_f64(b + i)), vld1q_f64(c + i));
    acc = vmaxq_f64(acc, v);
  }
  m = std::max(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
  for (; i < n; ++i) m = std::max(m, base + b[i] - c[i]);
  return m;
}

#endif  // MOT_NEON

namespace {

struct Dispatch {
  double (*max_abs)(const double*, std::size_t);
  double (*max_val)(const double*, std::size_t);
  double (*max_shifted)(double, const double*, const double*, std::size_t);
  std::string_view name;
};

constexpr Dispatch kScalar{detail::max_abs_scalar, detail::max_val_scalar,
                           detail::max_shifted_scalar, "scalar"};

Dispatch pick_backend() {
#ifdef MOT_X86
  if (__builtin_cpu_supports("avx2"))
    return {max_abs_avx2, max_val_avx2, max_shifted_avx2, "avx2"};
#endif
#ifdef MOT_NEON
  return {max_abs_neon, max_val_neon, max_shifted_neon, "neon"};
#endif
  return kScalar;
}

Dispatch g_active = pick_backend();
Dispatch g_best = g_active;

}  // namespace

double max_abs(const double* x, std::size_t n) { return g_active.max_abs(x, n); }
double max_val(const double* x, std::size_t n) { return g_active.max_val(x, n); }
double max_shifted(double base, const double* b, const double* c,
                   std::size_t n) {
  return g_active.max_shifted(base, b, c, n);
}

std::string_view active_backend() { return g_active.name; }

std::string_view force_scalar(bool on) {
  std::string_view prev = g_active.name;
  g_active = on ? kScalar : g_best;
  return prev;
}

}  // namespace mot::kern
