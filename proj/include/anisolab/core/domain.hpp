#pragma once

#include <functional>
#include <optional>

#include "anisolab/core/rng.hpp"
#include "anisolab/core/types.hpp"

namespace anisolab {

/// Axis-aligned box or Euclidean ball with exact volume; used for function
/// supports, Monte Carlo sampling domains and nested quadrature.
class Domain {
 public:
  static Domain ball(const Vec& center, double radius);
  static Domain box(const Vec& lo, const Vec& hi);

  bool is_ball() const { return ball_; }
  int dimension() const { return static_cast<int>(center_.size()); }
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }

  double volume() const;
  bool contains(const Vec& x) const;
  Vec sample(Philox& rng) const;

  /// {s : p + s d in D}, or nullopt if the line misses D.
  std::optional<Interval> line_chord(const Vec& p, const Vec& d) const;

  /// sup{t >= 0 : x + t theta in D} for x in D.
  double exit_time(const Vec& x, const Vec& theta) const;

  /// Range of coordinate k given coordinates 0..k-1 of `partial`, the
  /// remaining coordinates free (iterated-integral limits).
  Interval axis_range(int k, const Vec& partial) const;

  /// Euclidean distance from x to D (0 inside).
  double distance(const Vec& x) const;

  /// max_{x in D} |x|.
  double max_norm() const;

 private:
  bool ball_ = true;
  Vec center_;
  double radius_ = 0.0;
  Vec lo_;
  Vec hi_;
};

/// Restriction of the innermost integration variable to (or away from) a
/// set whose axis chords are known, e.g. a scaled convex body.
struct Clip {
  /// Chord of the clip set along `axis` through `point`.
  std::function<std::optional<Interval>(const Vec& point, int axis)> chord;
  bool inside = true;
};

/// Iterated adaptive Gauss-Kronrod over a ball or box (n <= 3).
double integrate_domain(const Domain& domain, const std::function<double(const Vec&)>& h,
                        double rel_tol = 1e-9, const Clip* clip = nullptr);

}  // namespace anisolab
