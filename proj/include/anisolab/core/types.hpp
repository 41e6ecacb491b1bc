#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>

namespace anisolab {

/// Largest ambient dimension supported by the small-vector types.
inline constexpr int kMaxDim = 8;

/// Stack-allocated dynamic vector (no heap traffic in inner loops).
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return lo <= t && t <= hi; }
};

/// Monte Carlo (or quadrature) scalar with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

enum class Verdict { pass, fail, inconclusive };

const char* to_string(Verdict v);

/// Combine verdicts: any fail wins, then any inconclusive.
Verdict combine(Verdict a, Verdict b);

}  // namespace anisolab
