#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "anisolab/core/parallel.hpp"
#include "anisolab/core/sweep.hpp"
#include "anisolab/functions/test_function.hpp"
#include "anisolab/geometry/convex_body.hpp"

namespace anisolab {

/// part_a: E_{lambda,K} with gauge exponent n/p + 1 (large-lambda regime).
/// part_b: the tilde set with exponent n/p (small-lambda regime).
enum class LevelSetKind { part_a, part_b };

const char* to_string(LevelSetKind k);
double gauge_exponent(LevelSetKind kind, int n, double p);

struct LevelSetOptions {
  McConfig mc{};
  /// Grid cells per ray before bisection of membership changes.
  int subdivisions = 256;
  /// Rays whose exterior section reaches beyond this radius raise
  /// ErrorCode::infinite_measure.
  double max_radius = 1e12;
  /// Restrict to pairs with ||y||_K > ||x||_K.
  bool upper_half = false;
  /// Part b only: subtract the exterior term whose mean is known in closed
  /// form (|K| lambda^{-p} ||f||_p^p per orientation) and add it back exactly.
  bool control_variate = true;
};

struct LevelSetQuery {
  const TestFunction* f = nullptr;
  const ConvexBody* body = nullptr;
  double p = 1.0;
  LevelSetKind kind = LevelSetKind::part_b;
  double lambda = 1.0;
  LevelSetOptions options{};
};

/// Lebesgue measure in R^{2n} of {(x, y) : |f(x) - f(y)| >= lambda ||x - y||_K^e}.
///
/// x is uniform in the sampling domain D and y = x + t theta. Each ray is
/// scanned on a half-geometric, half-uniform grid in t, sign changes of the
/// membership test are bisected to 1e-10 relative, and member intervals are
/// integrated exactly against t^{n-1}. Pairs with x outside D are folded in
/// by symmetry, so the exterior part of each ray carries weight 2 (weight 1
/// under `upper_half`, where the interior part is cut to ||y||_K > ||x||_K).
Estimate levelset_measure(const LevelSetQuery& q);

struct GridMeasure {
  double measure = 0.0;  // both triangles
  double upper = 0.0;    // cells with y > x
  double lower = 0.0;    // cells with y < x
  Interval window{};
};

/// Midpoint-grid measure for n = 1 on window x window. The default window is
/// the sampling domain dilated by the largest possible |x - y| of a member
/// pair. Diagonal cells take the membership of their off-diagonal neighbour.
/// Throws ErrorCode::window_too_small if a boundary cell is a member.
GridMeasure levelset_measure_bruteforce(const LevelSetQuery& q, int resolution,
                                        std::optional<Interval> window = std::nullopt);

/// `points_per_decade` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points_per_decade);

/// Default lambda grid: part b spans [1e-4, 1]; part a spans [1e2, 1e5]
/// times a * (circumradius of K)^e, the scale above which every direction
/// meets the Lipschitz bound.
std::vector<double> default_lambda_grid(LevelSetKind kind, const TestFunction& f,
                                        const ConvexBody& body, double p, int points_per_decade = 16);

struct QuasinormResult {
  Estimate estimate;
  double argmax = 0.0;
  bool argmax_at_boundary = false;
  std::vector<SweepRow> rows;  // (lambda, lambda^p mu, ...) including refinement
};

/// max over the grid of lambda^p mu(lambda), refined once around the argmax.
/// A boundary argmax is compared with the extrapolated one-sided limit
/// (argmax 0 or infinity when that limit is larger).
QuasinormResult weak_quasinorm(const TestFunction& f, const ConvexBody& body, double p,
                               LevelSetKind kind, const std::vector<double>& lambdas,
                               const LevelSetOptions& options = {});

/// Rows (lambda, lambda^p mu(E), ...) with reference (2/n) \int ||grad f||^p_{Z_p^* K};
/// pass if the largest-lambda row is within 10%.
SweepTable limit_sweep_large_lambda(const TestFunction& f, const ConvexBody& body, double p,
                                    const std::vector<double>& lambdas,
                                    const LevelSetOptions& options = {});

/// Rows (lambda, lambda^p mu(tilde E), ...) with reference 2|K| ||f||_p^p;
/// pass if the smallest-lambda row is within 5%.
SweepTable limit_sweep_small_lambda(const TestFunction& f, const ConvexBody& body, double p,
                                    const std::vector<double>& lambdas,
                                    const LevelSetOptions& options = {});

/// True if the raw measures never increase with lambda by more than three
/// combined standard errors.
bool measures_nonincreasing(const SweepTable& table);

struct SandwichReport {
  LevelSetKind kind = LevelSetKind::part_b;
  double lower = 0.0;
  double upper = 0.0;      // NaN for part a (constant not explicit)
  QuasinormResult quasinorm;
  double ratio = 0.0;      // quasinorm / lower bound
  Verdict verdict = Verdict::inconclusive;
};

SandwichReport sandwich_check(const TestFunction& f, const ConvexBody& body, double p,
                              LevelSetKind kind, const std::vector<double>& lambdas,
                              const LevelSetOptions& options = {});

struct TruncationReport {
  double lambda = 0.0, r = 0.0, split = 0.0;
  Estimate full, a_f, a_g, a_f_bar;
  bool upper_holds = false;  // mu(E) <= mu(A_f) + mu(A_g)
  bool lower_holds = false;  // mu(E) >= mu(bar A_f) - mu(A_g)
  Verdict verdict = Verdict::inconclusive;
};

/// Part-b inclusion bounds for f = f_r + g_r with f_r = f 1{||x||_K <= r}:
/// A_f at lambda (1 - split), A_g at lambda split, bar A_f at lambda (1 + split).
TruncationReport truncation_consistency(const TestFunction& f, std::shared_ptr<const ConvexBody> body,
                                        double p, double lambda, double r, double split,
                                        const LevelSetOptions& options = {});

}  // namespace anisolab
