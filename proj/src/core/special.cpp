#include "anisolab/core/special.hpp"

#include <cmath>
#include <numbers>

#include "anisolab/core/error.hpp"

namespace anisolab {

double unit_sphere_area(int n) {
  require(n >= 1, "unit_sphere_area: n must be positive");
  const double half = 0.5 * n;
  return std::exp(std::log(2.0) + half * std::log(std::numbers::pi) - std::lgamma(half));
}

double unit_ball_volume(int n) {
  require(n >= 1, "unit_ball_volume: n must be positive");
  const double half = 0.5 * n;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

double k_constant(double p, int n) {
  require(p >= 1.0, "k_constant: p must be >= 1");
  require(n >= 1, "k_constant: n must be positive");
  const double log_k = std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) +
                       0.5 * (n - 1) * std::log(std::numbers::pi) - std::lgamma(0.5 * (n + p));
  return std::exp(log_k);
}

}  // namespace anisolab
