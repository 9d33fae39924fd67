#include "mot/tensor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mot/kernels.hpp"

namespace mot {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_axis(const Shape& s, std::size_t axis) {
  if (axis >= s.axes()) throw std::out_of_range("tensor axis out of range");
}

void check_beta(const Potentials& beta, const Shape& s) {
  if (beta.size() != s.axes())
    throw std::invalid_argument("potentials/shape axis count mismatch");
  for (std::size_t l = 0; l < beta.size(); ++l)
    if (beta[l].size() != s.sizes[l])
      throw std::invalid_argument("potential length mismatch on axis");
}

// Advance a multi-index over the leading m-1 axes (row-major order).
bool advance_row(std::vector<std::size_t>& idx, const Shape& s) {
  const std::size_t m = s.axes();
  for (std::size_t l = m - 1; l-- > 0;) {
    if (++idx[l] < s.sizes[l]) return true;
    idx[l] = 0;
  }
  return false;
}

}  // namespace

Shape::Shape(std::vector<std::size_t> s) : sizes(std::move(s)) {
  if (sizes.empty()) throw std::invalid_argument("tensor needs at least 1 axis");
  unsigned __int128 total = 1;
  for (std::size_t n : sizes) {
    if (n == 0) throw std::invalid_argument("axis size must be >= 1");
    total *= n;
    if (total > (unsigned __int128)1 << 62)
      throw std::invalid_argument("tensor element count exceeds addressable range");
  }
}

std::size_t Shape::count() const {
  std::size_t total = 1;
  for (std::size_t n : sizes) total *= n;
  return total;
}

DenseTensor::DenseTensor(Shape s) : shape(std::move(s)) {
  data.assign(shape.count(), 0.0);
}

DenseTensor::DenseTensor(Shape s, Vec d) : shape(std::move(s)), data(std::move(d)) {
  if (data.size() != shape.count())
    throw std::invalid_argument("tensor data length does not match shape");
}

std::size_t DenseTensor::flat_index(const std::vector<std::size_t>& idx) const {
  if (idx.size() != shape.axes())
    throw std::invalid_argument("index arity mismatch");
  std::size_t flat = 0;
  for (std::size_t l = 0; l < idx.size(); ++l) {
    if (idx[l] >= shape.sizes[l]) throw std::out_of_range("index out of range");
    flat = flat * shape.sizes[l] + idx[l];
  }
  return flat;
}

double& DenseTensor::at(const std::vector<std::size_t>& idx) {
  return data[flat_index(idx)];
}

double DenseTensor::at(const std::vector<std::size_t>& idx) const {
  return data[flat_index(idx)];
}

DenseTensor zeros(Shape s) { return DenseTensor(std::move(s)); }

Vec marginal(const DenseTensor& t, std::size_t axis) {
  check_axis(t.shape, axis);
  const std::size_t m = t.shape.axes();
  Vec out(t.shape.sizes[axis], 0.0);
  // stride of `axis` and size of one period in flat order
  std::size_t stride = 1;
  for (std::size_t l = axis + 1; l < m; ++l) stride *= t.shape.sizes[l];
  const std::size_t naxis = t.shape.sizes[axis];
  const std::size_t period = stride * naxis;
  for (std::size_t flat = 0; flat < t.data.size(); ++flat)
    out[(flat % period) / stride] += t.data[flat];
  return out;
}

double inner(const DenseTensor& a, const DenseTensor& b) {
  if (!(a.shape == b.shape)) throw std::invalid_argument("shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

double norm1(const DenseTensor& a) {
  double s = 0.0;
  for (double v : a.data) s += std::fabs(v);
  return s;
}

double normInf(const DenseTensor& a) {
  return kern::max_abs(a.data.data(), a.data.size());
}

double lse(const Vec& v) {
  const double m = kern::max_val(v.data(), v.size());
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

Vec lse_marginal(const Potentials& beta, const DenseTensor& scaledCost,
                 std::size_t axis) {
  const Shape& sh = scaledCost.shape;
  check_axis(sh, axis);
  check_beta(beta, sh);
  const std::size_t m = sh.axes();
  const std::size_t last = m - 1;
  const std::size_t nlast = sh.sizes[last];
  const double* blast = beta[last].data();
  const std::size_t nout = sh.sizes[axis];
  Vec maxs(nout, kNegInf), sums(nout, 0.0), out(nout, kNegInf);

  // Pass 1: per-output-entry running maximum of the log terms.
  {
    std::vector<std::size_t> idx(m, 0);
    std::size_t off = 0;
    do {
      double base = 0.0;
      for (std::size_t l = 0; l < last; ++l) base += beta[l][idx[l]];
      const double* c = scaledCost.data.data() + off;
      if (axis == last) {
        for (std::size_t i = 0; i < nlast; ++i)
          maxs[i] = std::max(maxs[i], base + blast[i] - c[i]);
      } else {
        const std::size_t j = idx[axis];
        maxs[j] = std::max(maxs[j], kern::max_shifted(base, blast, c, nlast));
      }
      off += nlast;
    } while (advance_row(idx, sh));
  }

  // Pass 2: sequential exp-sum around the shifted maxima.
  {
    std::vector<std::size_t> idx(m, 0);
    std::size_t off = 0;
    do {
      double base = 0.0;
      for (std::size_t l = 0; l < last; ++l) base += beta[l][idx[l]];
      const double* c = scaledCost.data.data() + off;
      if (axis == last) {
        for (std::size_t i = 0; i < nlast; ++i)
          if (maxs[i] != kNegInf)
            sums[i] += std::exp(base + blast[i] - c[i] - maxs[i]);
      } else {
        const std::size_t j = idx[axis];
        if (maxs[j] != kNegInf) {
          double s = 0.0;
          const double shift = base - maxs[j];
          for (std::size_t i = 0; i < nlast; ++i)
            s += std::exp(shift + blast[i] - c[i]);
          sums[j] += s;
        }
      }
      off += nlast;
    } while (advance_row(idx, sh));
  }

  for (std::size_t j = 0; j < nout; ++j)
    if (maxs[j] != kNegInf) out[j] = maxs[j] + std::log(sums[j]);
  return out;
}

double lse_total(const Potentials& beta, const DenseTensor& scaledCost) {
  const Shape& sh = scaledCost.shape;
  check_beta(beta, sh);
  const std::size_t m = sh.axes();
  const std::size_t last = m - 1;
  const std::size_t nlast = sh.sizes[last];
  const double* blast = beta[last].data();

  double gmax = kNegInf;
  {
    std::vector<std::size_t> idx(m, 0);
    std::size_t off = 0;
    do {
      double base = 0.0;
      for (std::size_t l = 0; l < last; ++l) base += beta[l][idx[l]];
      gmax = std::max(gmax, kern::max_shifted(base, blast,
                                              scaledCost.data.data() + off,
                                              nlast));
      off += nlast;
    } while (advance_row(idx, sh));
  }
  if (gmax == kNegInf) return kNegInf;

  double sum = 0.0;
  {
    std::vector<std::size_t> idx(m, 0);
    std::size_t off = 0;
    do {
      double base = 0.0;
      for (std::size_t l = 0; l < last; ++l) base += beta[l][idx[l]];
      const double* c = scaledCost.data.data() + off;
      const double shift = base - gmax;
      for (std::size_t i = 0; i < nlast; ++i)
        sum += std::exp(shift + blast[i] - c[i]);
      off += nlast;
    } while (advance_row(idx, sh));
  }
  return gmax + std::log(sum);
}

DenseTensor materialize(const Potentials& beta, const DenseTensor& scaledCost,
                        double logShift) {
  const Shape& sh = scaledCost.shape;
  check_beta(beta, sh);
  const std::size_t m = sh.axes();
  const std::size_t last = m - 1;
  const std::size_t nlast = sh.sizes[last];
  const double* blast = beta[last].data();
  DenseTensor out(sh);
  std::vector<std::size_t> idx(m, 0);
  std::size_t off = 0;
  do {
    double base = -logShift;
    for (std::size_t l = 0; l < last; ++l) base += beta[l][idx[l]];
    const double* c = scaledCost.data.data() + off;
    for (std::size_t i = 0; i < nlast; ++i)
      out.data[off + i] = std::exp(base + blast[i] - c[i]);
    off += nlast;
  } while (advance_row(idx, sh));
  return out;
}

}  // namespace mot
