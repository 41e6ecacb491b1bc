#include "anisolab/core/domain.hpp"

#include <algorithm>
#include <cmath>

#include "anisolab/core/error.hpp"
#include "anisolab/core/quadrature.hpp"
#include "anisolab/core/special.hpp"

namespace anisolab {

Domain Domain::ball(const Vec& center, double radius) {
  require(center.size() >= 1 && center.size() <= kMaxDim, "Domain: bad dimension");
  require(radius >= 0.0 && std::isfinite(radius), "Domain: radius must be finite and >= 0");
  Domain d;
  d.ball_ = true;
  d.center_ = center;
  d.radius_ = radius;
  d.lo_ = center.array() - radius;
  d.hi_ = center.array() + radius;
  return d;
}

Domain Domain::box(const Vec& lo, const Vec& hi) {
  require(lo.size() == hi.size() && lo.size() >= 1 && lo.size() <= kMaxDim,
          "Domain: bad dimension");
  require((hi.array() >= lo.array()).all(), "Domain: box needs lo <= hi");
  Domain d;
  d.ball_ = false;
  d.lo_ = lo;
  d.hi_ = hi;
  d.center_ = 0.5 * (lo + hi);
  d.radius_ = 0.5 * (hi - lo).norm();
  return d;
}

double Domain::volume() const {
  if (ball_) return unit_ball_volume(dimension()) * std::pow(radius_, dimension());
  return (hi_ - lo_).prod();
}

bool Domain::contains(const Vec& x) const {
  if (ball_) return (x - center_).squaredNorm() <= radius_ * radius_;
  return (x.array() >= lo_.array()).all() && (x.array() <= hi_.array()).all();
}

Vec Domain::sample(Philox& rng) const {
  const int n = dimension();
  if (ball_) return center_ + radius_ * random_in_unit_ball(n, rng);
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = lo_[i] + (hi_[i] - lo_[i]) * rng.uniform();
  return x;
}

std::optional<Interval> Domain::line_chord(const Vec& p, const Vec& d) const {
  if (ball_) {
    const Vec q = p - center_;
    const double a = d.squaredNorm();
    if (a == 0.0) return std::nullopt;
    const double b = q.dot(d);
    const double c = q.squaredNorm() - radius_ * radius_;
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    return Interval{(-b - root) / a, (-b + root) / a};
  }
  double lo = -kInf, hi = kInf;
  for (int i = 0; i < dimension(); ++i) {
    if (d[i] == 0.0) {
      if (p[i] < lo_[i] || p[i] > hi_[i]) return std::nullopt;
      continue;
    }
    double s0 = (lo_[i] - p[i]) / d[i];
    double s1 = (hi_[i] - p[i]) / d[i];
    if (s0 > s1) std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
  }
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

double Domain::exit_time(const Vec& x, const Vec& theta) const {
  if (ball_) {
    // Larger root of |x - c + t theta|^2 = r^2, computed without cancellation.
    const Vec q = x - center_;
    const double a = theta.squaredNorm();
    const double b = q.dot(theta);
    const double c = q.squaredNorm() - radius_ * radius_;
    if (c >= 0.0) return 0.0;
    const double disc = std::max(b * b - a * c, 0.0);
    const double root = std::sqrt(disc);
    return b >= 0.0 ? (-c) / (b + root) : (root - b) / a;
  }
  double t = kInf;
  for (int i = 0; i < dimension(); ++i) {
    if (theta[i] > 0.0) t = std::min(t, (hi_[i] - x[i]) / theta[i]);
    else if (theta[i] < 0.0) t = std::min(t, (lo_[i] - x[i]) / theta[i]);
  }
  return std::max(t, 0.0);
}

Interval Domain::axis_range(int k, const Vec& partial) const {
  if (!ball_) return {lo_[k], hi_[k]};
  double used = 0.0;
  for (int j = 0; j < k; ++j) used += (partial[j] - center_[j]) * (partial[j] - center_[j]);
  const double half = std::sqrt(std::max(radius_ * radius_ - used, 0.0));
  return {center_[k] - half, center_[k] + half};
}

double Domain::distance(const Vec& x) const {
  if (ball_) return std::max((x - center_).norm() - radius_, 0.0);
  const Vec clamped = x.cwiseMax(lo_).cwiseMin(hi_);
  return (x - clamped).norm();
}

double Domain::max_norm() const {
  if (ball_) return center_.norm() + radius_;
  double s = 0.0;
  for (int i = 0; i < dimension(); ++i) {
    const double m = std::max(std::abs(lo_[i]), std::abs(hi_[i]));
    s += m * m;
  }
  return std::sqrt(s);
}

namespace {

double nested(const Domain& domain, const std::function<double(const Vec&)>& h, double tol,
              const Clip* clip, Vec& point, int k) {
  const int n = domain.dimension();
  const Interval range = domain.axis_range(k, point);
  if (!(range.hi > range.lo)) return 0.0;
  auto inner = [&](double t) {
    point[k] = t;
    return k + 1 == n ? h(point) : nested(domain, h, tol, clip, point, k + 1);
  };
  if (k + 1 < n || clip == nullptr) return integrate_adaptive(inner, range.lo, range.hi, tol).value;

  // Innermost axis: split the domain chord by the clip chord.
  const std::optional<Interval> c = clip->chord(point, k);
  double total = 0.0;
  if (clip->inside) {
    if (!c) return 0.0;
    const double lo = std::max(range.lo, c->lo);
    const double hi = std::min(range.hi, c->hi);
    if (hi > lo) total += integrate_adaptive(inner, lo, hi, tol).value;
  } else {
    if (!c) return integrate_adaptive(inner, range.lo, range.hi, tol).value;
    const double left_hi = std::min(range.hi, c->lo);
    if (left_hi > range.lo) total += integrate_adaptive(inner, range.lo, left_hi, tol).value;
    const double right_lo = std::max(range.lo, c->hi);
    if (range.hi > right_lo) total += integrate_adaptive(inner, right_lo, range.hi, tol).value;
  }
  return total;
}

}  // namespace

double integrate_domain(const Domain& domain, const std::function<double(const Vec&)>& h,
                        double rel_tol, const Clip* clip) {
  require(domain.dimension() <= 3, "integrate_domain: tensor quadrature supports n <= 3");
  Vec point = Vec::Zero(domain.dimension());
  return nested(domain, h, rel_tol, clip, point, 0);
}

}  // namespace anisolab
