#pragma once

#include <cstddef>
#include <cstdint>

namespace anisolab::simd {

/// Structure-of-arrays block of points: coordinate k of point i lives at
/// data[k * stride + i].
struct PointBlock {
  const double* data = nullptr;
  std::size_t count = 0;
  std::size_t stride = 0;
  int dim = 0;
};

// out[i] = |z . y_i|^p
using AbsDotPowFn = void (*)(const double* z, const PointBlock& y, double p, double* out);
// out[i] = max_j |a_j . y_i|, rows a_j stored contiguously (rows x dim)
using MaxAbsDotFn = void (*)(const double* rows, int nrows, const PointBlock& y, double* out);
// out[i] = sqrt(y_i^T A y_i), A dense row-major dim x dim
using QuadFormSqrtFn = void (*)(const double* a, const PointBlock& y, double* out);
// out[i] = values[i] >= threshold
using ThresholdMaskFn = void (*)(const double* values, std::size_t count, double threshold,
                                 std::uint8_t* out);

struct KernelTable {
  const char* name;
  AbsDotPowFn abs_dot_pow;
  MaxAbsDotFn max_abs_dot;
  QuadFormSqrtFn quad_form_sqrt;
  ThresholdMaskFn threshold_mask;
};

const KernelTable& scalar_kernels();

/// AVX2+FMA table, or nullptr when the CPU (or build) lacks it.
const KernelTable* avx2_kernels();

/// Table chosen once per process: AVX2 when available unless the
/// environment sets ANISOLAB_ISA=scalar.
const KernelTable& kernels();

}  // namespace anisolab::simd
