#pragma once

#include <functional>
#include <span>
#include <vector>

namespace anisolab {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

using Integrand1D = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7/15) on [a, b].
QuadResult integrate_adaptive(const Integrand1D& f, double a, double b,
                              double rel_tol = 1e-10, unsigned max_depth = 15);

/// Adaptive Gauss-Kronrod over consecutive pieces of a sorted breakpoint list.
QuadResult integrate_piecewise(const Integrand1D& f, std::span<const double> breakpoints,
                               double rel_tol = 1e-10, unsigned max_depth = 15);

/// Fixed composite rule: nodes and weights on an interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  // Distance from each node to the nearer endpoint, exact even where
  // `nodes` has rounded onto the endpoint.
  std::vector<double> gaps;

  double apply(const Integrand1D& f) const;
  /// Sum of w_i f(x_i, gap_i).
  double apply_with_gap(const std::function<double(double, double)>& f) const;
};

/// Composite 8-point Gauss-Legendre with `panels` equal panels.
QuadratureRule gauss_legendre(double a, double b, int panels);

/// Composite Gauss-Legendre with geometric grading toward both endpoints:
/// `levels` panels shrinking by `ratio` at each end plus `core_panels`
/// uniform panels in the middle. Converges for integrable endpoint power
/// singularities.
QuadratureRule graded_gauss_legendre(double a, double b, int core_panels, int levels,
                                     double ratio = 0.15);

}  // namespace anisolab
