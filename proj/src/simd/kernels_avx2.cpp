// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "anisolab/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace anisolab::simd {

namespace {

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline __m256d dot4(const double* z, const PointBlock& y, std::size_t i) {
  __m256d acc = _mm256_setzero_pd();
  for (int k = 0; k < y.dim; ++k)
    acc = _mm256_fmadd_pd(_mm256_set1_pd(z[k]), _mm256_loadu_pd(y.data + k * y.stride + i), acc);
  return acc;
}

void abs_dot_pow(const double* z, const PointBlock& y, double p, double* out) {
  const int ip = small_integer_power(p);
  std::size_t i = 0;
  for (; i + 4 <= y.count; i += 4) {
    const __m256d a = abs_pd(dot4(z, y, i));
    if (ip > 0) {
      __m256d r = a;
      for (int e = 1; e < ip; ++e) r = _mm256_mul_pd(r, a);
      _mm256_storeu_pd(out + i, r);
    } else {
      alignas(32) double lane[4];
      _mm256_store_pd(lane, a);
      for (int l = 0; l < 4; ++l) out[i + l] = std::pow(lane[l], p);
    }
  }
  for (; i < y.count; ++i) {
    double dot = 0.0;
    for (int k = 0; k < y.dim; ++k) dot = std::fma(z[k], y.data[k * y.stride + i], dot);
    const double a = std::abs(dot);
    out[i] = ip > 0 ? int_pow(a, ip) : std::pow(a, p);
  }
}

void max_abs_dot(const double* rows, int nrows, const PointBlock& y, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= y.count; i += 4) {
    __m256d best = _mm256_setzero_pd();
    for (int j = 0; j < nrows; ++j) best = _mm256_max_pd(best, abs_pd(dot4(rows + j * y.dim, y, i)));
    _mm256_storeu_pd(out + i, best);
  }
  for (; i < y.count; ++i) {
    double best = 0.0;
    for (int j = 0; j < nrows; ++j) {
      double dot = 0.0;
      for (int k = 0; k < y.dim; ++k) dot = std::fma(rows[j * y.dim + k], y.data[k * y.stride + i], dot);
      best = std::max(best, std::abs(dot));
    }
    out[i] = best;
  }
}

void quad_form_sqrt(const double* a, const PointBlock& y, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= y.count; i += 4) {
    __m256d q = _mm256_setzero_pd();
    for (int r = 0; r < y.dim; ++r) {
      const __m256d row = dot4(a + r * y.dim, y, i);
      q = _mm256_fmadd_pd(_mm256_loadu_pd(y.data + r * y.stride + i), row, q);
    }
    q = _mm256_max_pd(q, _mm256_setzero_pd());
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(q));
  }
  for (; i < y.count; ++i) {
    double q = 0.0;
    for (int r = 0; r < y.dim; ++r) {
      double row = 0.0;
      for (int c = 0; c < y.dim; ++c) row = std::fma(a[r * y.dim + c], y.data[c * y.stride + i], row);
      q = std::fma(y.data[r * y.stride + i], row, q);
    }
    out[i] = std::sqrt(std::max(q, 0.0));
  }
}

void threshold_mask(const double* values, std::size_t count, double threshold,
                    std::uint8_t* out) {
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(values + i), thr, _CMP_GE_OQ));
    for (int l = 0; l < 4; ++l) out[i + l] = static_cast<std::uint8_t>((bits >> l) & 1);
  }
  for (; i < count; ++i) out[i] = values[i] >= threshold ? 1 : 0;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", abs_dot_pow, max_abs_dot, quad_form_sqrt,
                                 threshold_mask};
  return table;
}

}  // namespace anisolab::simd
