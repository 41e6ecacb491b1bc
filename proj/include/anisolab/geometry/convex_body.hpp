#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anisolab/core/parallel.hpp"
#include "anisolab/core/rng.hpp"
#include "anisolab/core/types.hpp"
#include "anisolab/simd/kernels.hpp"

namespace anisolab {

enum class Shape { ball, ellipsoid, box, polytope, lq_ball };

const char* to_string(Shape s);

/// Origin-symmetric convex body with an exact gauge.
///
/// Immutable after construction; safe to share between threads.
class ConvexBody {
 public:
  static ConvexBody ball(int n, double radius = 1.0);
  /// {x : x^T A x <= 1}, A symmetric positive definite.
  static ConvexBody ellipsoid(const Mat& a);
  static ConvexBody box(const Vec& half_widths);
  /// {x : |a_i . x| <= 1 for all i}; the normals must span R^n.
  static ConvexBody polytope(const std::vector<Vec>& normals);
  static ConvexBody lq_ball(int n, double q, double scale = 1.0);

  Shape shape() const { return shape_; }
  int dimension() const { return n_; }
  std::string describe() const;

  double gauge(const Vec& x) const;
  /// Gauges of a block of points, through the SIMD kernel table.
  void gauge_batch(const simd::PointBlock& pts, double* out) const;

  /// Lebesgue measure; exact except for polytopes (rejection estimate with a
  /// fixed internal seed, computed once at construction).
  Estimate volume() const { return volume_; }
  /// Polytope volume with an explicit budget (exact shapes ignore `mc`).
  Estimate volume(const McConfig& mc) const;

  Vec sample_uniform(Philox& rng) const;

  /// Coordinate half-widths of the smallest axis box containing K.
  const Vec& bounding_half_widths() const { return bbox_; }
  /// max_{x in K} |x|.
  double circumradius() const { return circumradius_; }
  /// max{rho : rho B^n subset K}; sup of the gauge on the unit sphere is 1/inradius.
  double inradius() const { return inradius_; }

  /// {s : gauge(p + s d) <= r}, or nullopt if empty.
  std::optional<Interval> chord(const Vec& p, const Vec& d, double r = 1.0) const;

  // Shape parameters.
  double radius() const { return radius_; }
  const Mat& form() const { return form_; }
  const Vec& half_widths() const { return bbox_; }
  const std::vector<Vec>& normals() const { return normals_; }
  double q() const { return q_; }
  double scale() const { return radius_; }

 private:
  ConvexBody() = default;
  void check_dim(const Vec& x) const;
  void finish();

  Shape shape_ = Shape::ball;
  int n_ = 0;
  double radius_ = 1.0;           // ball radius or lq scale
  double q_ = 2.0;
  Mat form_;                      // ellipsoid A
  Mat sampler_map_;               // ellipsoid: x = L^{-T} u
  std::vector<Vec> normals_;
  std::vector<double> kernel_rows_;  // rows for max_abs_dot / quad_form
  Vec bbox_;
  double circumradius_ = 0.0;
  double inradius_ = 0.0;
  double acceptance_ = 1.0;       // |K| / |bounding box|
  Estimate volume_;
};

enum class MomentEstimator { automatic, closed_form, monte_carlo };

struct MomentNormSpec {
  const ConvexBody* body = nullptr;
  double p = 1.0;
  MomentEstimator estimator = MomentEstimator::automatic;
  McConfig mc{};
};

/// True if ||z||^p_{Z_p^* K} has a closed form for this body and p.
bool has_closed_form_moment(const ConvexBody& body, double p);

/// ||z||^p_{Z_p^* K} = ((n+p)/2) \int_K |z.y|^p dy.
Estimate moment_norm_p(const MomentNormSpec& spec, const Vec& z);

/// \int_K |y|^p dy (exact for ball and 1D, Monte Carlo otherwise).
Estimate body_abs_moment(const ConvexBody& body, double p, const McConfig& mc);

}  // namespace anisolab
