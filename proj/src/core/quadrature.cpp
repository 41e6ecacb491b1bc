#include "anisolab/core/quadrature.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "anisolab/core/error.hpp"

namespace anisolab {

namespace bq = boost::math::quadrature;

QuadResult integrate_adaptive(const Integrand1D& f, double a, double b, double rel_tol,
                              unsigned max_depth) {
  QuadResult out;
  if (!(b > a)) return out;
  double error = 0.0;
  out.value = bq::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol, &error);
  out.error = error;
  return out;
}

QuadResult integrate_piecewise(const Integrand1D& f, std::span<const double> breakpoints,
                               double rel_tol, unsigned max_depth) {
  QuadResult out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const QuadResult piece =
        integrate_adaptive(f, breakpoints[i], breakpoints[i + 1], rel_tol, max_depth);
    out.value += piece.value;
    out.error += piece.error;
  }
  return out;
}

double QuadratureRule::apply(const Integrand1D& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
  return sum;
}

double QuadratureRule::apply_with_gap(const std::function<double(double, double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i], gaps[i]);
  return sum;
}

namespace {

// Panel [off_lo, off_hi] measured from `anchor` in direction `dir`; offsets
// are distances to the endpoint nearest the panel.
void append_panel(QuadratureRule& rule, double anchor, double dir, double off_lo, double off_hi) {
  using Rule = bq::gauss<double, 8>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double mid = 0.5 * (off_lo + off_hi);
  const double half = 0.5 * (off_hi - off_lo);
  auto push = [&](double off, double weight) {
    rule.nodes.push_back(anchor + dir * off);
    rule.weights.push_back(weight);
    rule.gaps.push_back(off);
  };
  // boost stores the non-negative half of the symmetric rule.
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      push(mid, half * w[i]);
      continue;
    }
    push(mid - half * x[i], half * w[i]);
    push(mid + half * x[i], half * w[i]);
  }
}

void append_interior_panel(QuadratureRule& rule, double a, double b, double lo, double hi) {
  const std::size_t first = rule.nodes.size();
  append_panel(rule, a, 1.0, lo - a, hi - a);
  for (std::size_t i = first; i < rule.nodes.size(); ++i)
    rule.gaps[i] = std::min(rule.nodes[i] - a, b - rule.nodes[i]);
}

}  // namespace

QuadratureRule gauss_legendre(double a, double b, int panels) {
  require(panels >= 1, "gauss_legendre: panels must be positive");
  QuadratureRule rule;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) append_interior_panel(rule, a, b, a + i * h, a + (i + 1) * h);
  return rule;
}

QuadratureRule graded_gauss_legendre(double a, double b, int core_panels, int levels,
                                     double ratio) {
  require(core_panels >= 1 && levels >= 0, "graded_gauss_legendre: bad panel counts");
  require(ratio > 0.0 && ratio < 1.0, "graded_gauss_legendre: ratio must be in (0,1)");
  QuadratureRule rule;
  if (levels == 0) return gauss_legendre(a, b, core_panels);
  // Each end region covers a quarter of the interval and is split geometrically.
  const double end = 0.25 * (b - a);
  std::vector<double> cuts;  // offsets from the endpoint, increasing
  double edge = end;
  cuts.push_back(edge);
  for (int l = 0; l < levels; ++l) {
    edge *= ratio;
    cuts.push_back(edge);
  }
  // Left end: [a, a + cuts.back()], ..., [a + cuts[1], a + cuts[0]].
  append_panel(rule, a, 1.0, 0.0, cuts.back());
  for (int l = levels; l >= 1; --l) append_panel(rule, a, 1.0, cuts[l], cuts[l - 1]);
  const double h = (b - a - 2.0 * end) / core_panels;
  for (int i = 0; i < core_panels; ++i) append_interior_panel(rule, a, b, a + end + i * h, a + end + (i + 1) * h);
  for (int l = 1; l <= levels; ++l) append_panel(rule, b, -1.0, cuts[l], cuts[l - 1]);
  append_panel(rule, b, -1.0, 0.0, cuts.back());
  return rule;
}

}  // namespace anisolab
