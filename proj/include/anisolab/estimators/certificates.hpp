#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "anisolab/core/parallel.hpp"
#include "anisolab/estimators/level_set.hpp"
#include "anisolab/functions/test_function.hpp"
#include "anisolab/geometry/convex_body.hpp"

namespace anisolab {

/// Inputs shared by the two radius constructions. `bounds` already carries
/// the 1.01 safety factor when the catalog only has grid estimates.
struct ClaimContext {
  const TestFunction* f = nullptr;
  const ConvexBody* body = nullptr;
  double p = 1.0;
  SmoothnessBounds bounds{};
  double delta = 0.5;
  double lambda = 1.0;
};

ClaimContext make_claim_context(const TestFunction& f, const ConvexBody& body, double p,
                                double delta, double lambda);

/// r with r^n = min{(delta/b)^n |g|^n, (1-delta)^p |g|^p / (lambda^p ||w||^{n+p})},
/// g = grad f(x) . w. Every s in (0, r] puts (x, x + s w) in E_lambda.
double claim1_radius(const ClaimContext& ctx, const Vec& x, const Vec& omega);

/// R with R^n = (|g| + b (a / (lambda ||w||^{n/p+1}))^{p/n})^p / (lambda^p ||w||^{n+p}).
/// Members (x, x + t w) of E_lambda have t <= R.
double claim2_radius(const ClaimContext& ctx, const Vec& x, const Vec& omega);

struct Counterexample {
  Vec x;
  Vec omega;
  double s = 0.0;
  double margin = 0.0;  // negative on failure
};

struct ClaimReport {
  std::string claim;
  Verdict verdict = Verdict::inconclusive;
  std::size_t tested = 0;    // triples (claim 1) or accepted pairs (claim 2)
  std::size_t attempts = 0;  // rejection draws (claim 2)
  double min_margin = kInf;  // smallest relative margin seen
  std::vector<Counterexample> counterexamples;
};

/// Evaluates membership at s = r k / t_samples, k = 1..t_samples.
ClaimReport claim1_verify(const ClaimContext& ctx, const Vec& x, const Vec& omega,
                          int t_samples);

struct Claim2Options {
  std::size_t target_pairs = 1000;
  std::size_t budget = 1000000;
  std::size_t min_pairs = 10;
  std::uint64_t seed = 0;
  /// x is drawn from supp f grown by this margin.
  double dilation = 2.0;
};

/// Rejection-samples members (x, x + t theta) of E_lambda and checks
/// t <= R(x, theta) and dist(x, supp f) <= 1. Requires
/// lambda > a * circumradius(K)^{n/p+1}.
ClaimReport claim2_verify(const ClaimContext& ctx, const Claim2Options& options = {});

struct ClaimSuiteOptions {
  std::vector<double> deltas{0.25, 0.5, 0.75};
  std::vector<double> lambda_factors{10.0, 100.0};  // multiples of a
  std::size_t configs = 1000;                       // per (delta, lambda)
  std::uint64_t seed = 0;
};

/// Random (x, w, s) triples with s uniform in (0, r].
ClaimReport claim1_suite(const TestFunction& f, const ConvexBody& body, double p,
                         const ClaimSuiteOptions& options = {});

/// claim2_verify at lambda = factor * a * circumradius^{n/p+1} for each factor.
ClaimReport claim2_suite(const TestFunction& f, const ConvexBody& body, double p,
                         const ClaimSuiteOptions& options = {},
                         const Claim2Options& pair_options = {});

struct M1Report {
  double lambda = 0.0;
  double r = 0.0;
  double center = 0.0;  // |K| lambda^{-p} ||f||_p^p
  double slack = 0.0;   // |K|^2 r^{2n}
  Estimate upper_half;  // H+
  Estimate full;        // tilde E
  bool sandwich_holds = false;
  bool doubling_holds = false;  // mu(tilde E) = 2 mu(H+)
  Verdict verdict = Verdict::inconclusive;
};

/// Throws ErrorCode::support_not_contained unless supp f lies in r K.
M1Report m1_sandwich(const TestFunction& f, const ConvexBody& body, double p, double lambda,
                     double r, const LevelSetOptions& options = {});

struct HolderReport {
  std::size_t tested = 0;
  std::size_t violations = 0;
  double worst_slack = kInf;  // min of rhs - lhs
  Verdict verdict = Verdict::inconclusive;
};

/// |f(x) - f(y)| <= |x - y|^{1-1/p} (\int_0^{|x-y|} |grad f . w|^p)^{1/p} on
/// random segments, with 1e-10 slack.
HolderReport holder_chain_check(const TestFunction& f, double p, std::size_t segments,
                                std::uint64_t seed);

}  // namespace anisolab
