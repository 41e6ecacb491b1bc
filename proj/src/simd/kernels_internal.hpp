#pragma once

#include <cmath>

namespace anisolab::simd {

// Integer exponents 1..8 take a multiply chain instead of pow.
inline int small_integer_power(double p) {
  if (p >= 1.0 && p <= 8.0 && std::floor(p) == p) return static_cast<int>(p);
  return 0;
}

inline double int_pow(double a, int k) {
  double r = a;
  for (int i = 1; i < k; ++i) r *= a;
  return r;
}

}  // namespace anisolab::simd
