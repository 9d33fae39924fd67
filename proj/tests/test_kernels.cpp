#include <doctest.h>

#include <string>
#include <vector>

#include "mot/kernels.hpp"
#include "mot/rng.hpp"

using mot::SplitMix64;

namespace {

struct ScalarGuard {
  ScalarGuard() { mot::kern::force_scalar(true); }
  ~ScalarGuard() { mot::kern::force_scalar(false); }
};

}  // namespace

TEST_CASE("max kernels match the scalar reference bit for bit") {
  SplitMix64 rng(42);
  // Lengths straddling vector widths and remainders.
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u,
                        64u, 100u, 1023u}) {
    std::vector<double> a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(-100.0, 100.0);
      b[i] = rng.uniform(-100.0, 100.0);
      c[i] = rng.uniform(-100.0, 100.0);
    }
    const double base = rng.uniform(-10.0, 10.0);

    const double fAbs = mot::kern::max_abs(a.data(), n);
    const double fVal = mot::kern::max_val(a.data(), n);
    const double fSh = mot::kern::max_shifted(base, b.data(), c.data(), n);
    {
      ScalarGuard g;
      CHECK(mot::kern::max_abs(a.data(), n) == fAbs);
      CHECK(mot::kern::max_val(a.data(), n) == fVal);
      CHECK(mot::kern::max_shifted(base, b.data(), c.data(), n) == fSh);
    }
  }
}

TEST_CASE("scalar reference kernels compute plain maxima") {
  std::vector<double> a{3.0, -7.5, 2.0};
  CHECK(mot::kern::detail::max_abs_scalar(a.data(), 3) == 7.5);
  CHECK(mot::kern::detail::max_val_scalar(a.data(), 3) == 3.0);
  std::vector<double> b{0.0, 10.0};
  std::vector<double> c{1.0, 5.0};
  // max(base + b[i] - c[i]) = max(2 - 1, 2 + 5) = 7
  CHECK(mot::kern::detail::max_shifted_scalar(2.0, b.data(), c.data(), 2) ==
        7.0);
}

TEST_CASE("empty input yields -inf sentinels") {
  CHECK(mot::kern::max_val(nullptr, 0) < -1e300);
  CHECK(mot::kern::max_abs(nullptr, 0) == 0.0);
}

TEST_CASE("backend reports a known name") {
  const std::string b(mot::kern::active_backend());
  const bool known = b == "scalar" || b == "avx2" || b == "neon";
  CHECK(known);
}
