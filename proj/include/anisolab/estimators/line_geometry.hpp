#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "anisolab/core/parallel.hpp"
#include "anisolab/functions/test_function.hpp"
#include "anisolab/geometry/convex_body.hpp"

namespace anisolab {

/// n x (n-1) matrix whose orthonormal columns span omega^perp, built from the
/// Householder reflection that maps e_1 to a multiple of omega.
Mat orthonormal_complement(const Vec& omega);

/// Affine line hat x + R omega with hat x in omega^perp, stored by its
/// coordinates in `orthonormal_complement(omega)`.
struct Line {
  Vec omega;
  Vec coords;  // n - 1 entries

  int dimension() const { return static_cast<int>(omega.size()); }
  Vec base() const;
  Vec point(double s) const;
  /// s with point(s) equal to the projection of x onto the line.
  double param(const Vec& x) const;
  /// The line through two distinct points, directed from y to x.
  static Line through(const Vec& x, const Vec& y);
};

struct LineSample {
  Line line;
  double weight = 0.0;
};

/// (1/2) |S^{n-1}| vol_{n-1}(radius B^{n-1}): the density weight of one
/// line drawn by `sample_line`.
double line_sample_weight(int n, double window_radius);

/// omega uniform on S^{n-1}, hat x uniform in the (n-1)-ball of the given
/// radius in omega^perp.
LineSample sample_line(int n, double window_radius, Philox& rng);

struct PairIntegrand {
  std::function<double(const Vec& x, const Vec& y)> g;
  /// Optional line parameters where g may jump along `line`.
  std::function<std::vector<double>(const Line& line)> breakpoints;
};

/// Monte Carlo over lines of \int_L \int_L g(x, y) |x - y|^{n-1}, which
/// estimates \iint g dx dy for g supported in the window ball x window ball.
Estimate bp_integrate(const PairIntegrand& g, int n, double window_radius, const McConfig& mc,
                      double rel_tol = 1e-8);

/// 1_D(x) 1_D(y) for the unit disk and for [-1,1]^2 (integrals pi^2 and 16),
/// with breakpoints from the same tests g uses.
PairIntegrand unit_disk_pairs();
PairIntegrand unit_square_pairs();

/// A function of one real variable with compact support.
struct LineFunction {
  std::function<double(double)> F;
  Interval support;
};

struct ESetOptions {
  int resolution = 4000;      // grid cells per axis
  int table_nodes = 100000;   // cumulative-integral table size
  /// Default: the support dilated by 1.05 ||F||_1^{1/(gamma+1)} (and by at
  /// least two grid cells).
  std::optional<Interval> window;
};

/// Grid value of \iint_{E(F, gamma)} |x - y|^{gamma-1} dx dy with
/// E(F, gamma) = {x != y : |\int_y^x F| >= |x - y|^{gamma+1}}. Diagonal cells
/// add 2 h^{gamma+1} / (gamma (gamma + 1)) where F does not vanish.
/// Throws ErrorCode::window_too_small if a boundary cell is a member.
double e_set_measure_1d(const LineFunction& F, double gamma, const ESetOptions& options = {});

double l1_norm(const LineFunction& F);

/// e_set_measure_1d / ((5^gamma / gamma) ||F||_1).
double prop21_ratio(const LineFunction& F, double gamma, const ESetOptions& options = {});

using LineField = std::function<LineFunction(const Line& line)>;

/// F_L(s) = |grad f(hat x + s omega) . omega|^p / (lambda^p ||omega||_K^{n+p}).
LineField gradient_line_field(const TestFunction& f, const ConvexBody& body, double p, double lambda);

struct Prop22Report {
  Estimate lhs;       // L^{2n}(E(F)) through the line decomposition
  Estimate rhs;       // (1/2) \int_S \int_{omega^perp} \int_R |F|
  double ratio = 0.0;
  double envelope = 0.0;  // 100 * 5^n / n
  Verdict verdict = Verdict::inconclusive;
};

/// Both sides of the line-field inequality from the same line samples;
/// lines drawn within `window_radius` (which must contain every support).
Prop22Report prop22_check(const LineField& field, int n, double window_radius, const McConfig& mc,
                          const ESetOptions& per_line);

}  // namespace anisolab
