#include <cmath>

#include "anisolab/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace anisolab::simd {

namespace {

void abs_dot_pow(const double* z, const PointBlock& y, double p, double* out) {
  const int ip = small_integer_power(p);
  for (std::size_t i = 0; i < y.count; ++i) {
    double dot = 0.0;
    for (int k = 0; k < y.dim; ++k) dot += z[k] * y.data[k * y.stride + i];
    const double a = std::abs(dot);
    out[i] = ip > 0 ? int_pow(a, ip) : std::pow(a, p);
  }
}

void max_abs_dot(const double* rows, int nrows, const PointBlock& y, double* out) {
  for (std::size_t i = 0; i < y.count; ++i) {
    double best = 0.0;
    for (int j = 0; j < nrows; ++j) {
      double dot = 0.0;
      for (int k = 0; k < y.dim; ++k) dot += rows[j * y.dim + k] * y.data[k * y.stride + i];
      best = std::max(best, std::abs(dot));
    }
    out[i] = best;
  }
}

void quad_form_sqrt(const double* a, const PointBlock& y, double* out) {
  for (std::size_t i = 0; i < y.count; ++i) {
    double q = 0.0;
    for (int r = 0; r < y.dim; ++r) {
      double row = 0.0;
      for (int c = 0; c < y.dim; ++c) row += a[r * y.dim + c] * y.data[c * y.stride + i];
      q += y.data[r * y.stride + i] * row;
    }
    out[i] = std::sqrt(std::max(q, 0.0));
  }
}

void threshold_mask(const double* values, std::size_t count, double threshold,
                    std::uint8_t* out) {
  for (std::size_t i = 0; i < count; ++i) out[i] = values[i] >= threshold ? 1 : 0;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", abs_dot_pow, max_abs_dot, quad_form_sqrt,
                                 threshold_mask};
  return table;
}

}  // namespace anisolab::simd
