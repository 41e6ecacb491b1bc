#include "anisolab/estimators/certificates.hpp"

#include <algorithm>
#include <cmath>

#include "anisolab/core/error.hpp"
#include "anisolab/core/quadrature.hpp"
#include "anisolab/core/rng.hpp"
#include "anisolab/core/streams.hpp"

namespace anisolab {

namespace {

constexpr double kSafety = 1.01;

// Analytic support; the gaussian is positive everywhere.
double support_distance(const TestFunction& f, const Vec& x) {
  if (f.kind() == FunctionKind::gaussian) return 0.0;
  return f.support().distance(x);
}

Domain grown(const Domain& d, double margin) {
  if (d.is_ball()) return Domain::ball(d.center(), d.radius() + margin);
  return Domain::box(d.lo().array() - margin, d.hi().array() + margin);
}

void record(ClaimReport& rep, double margin, const Vec& x, const Vec& omega, double s) {
  rep.min_margin = std::min(rep.min_margin, margin);
  if (margin < 0.0) rep.counterexamples.push_back({x, omega, s, margin});
}

void merge(ClaimReport& into, const ClaimReport& part) {
  into.tested += part.tested;
  into.attempts += part.attempts;
  into.min_margin = std::min(into.min_margin, part.min_margin);
  into.counterexamples.insert(into.counterexamples.end(), part.counterexamples.begin(),
                              part.counterexamples.end());
}

// sup of the gauge over the support set.
double support_gauge(const TestFunction& f, const ConvexBody& body) {
  if (f.kind() == FunctionKind::zero) return 0.0;
  if (f.kind() == FunctionKind::gaussian) return kInf;
  const Domain& d = f.support();
  if (d.is_ball()) return body.gauge(d.center()) + d.radius() / body.inradius();
  // The gauge is convex, so its max over a box sits at a corner.
  const int n = d.dimension();
  double best = 0.0;
  Vec corner(n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    for (int k = 0; k < n; ++k) corner[k] = (mask >> k) & 1u ? d.hi()[k] : d.lo()[k];
    best = std::max(best, body.gauge(corner));
  }
  return best;
}

}  // namespace

ClaimContext make_claim_context(const TestFunction& f, const ConvexBody& body, double p,
                                double delta, double lambda) {
  require(f.dimension() == body.dimension(), "claims: dimension mismatch");
  require(p >= 1.0 && std::isfinite(p), "claims: p must be >= 1");
  require(delta > 0.0 && delta < 1.0, "claims: delta must lie in (0, 1)");
  require(lambda > 0.0 && std::isfinite(lambda), "claims: lambda must be positive");
  ClaimContext ctx;
  ctx.f = &f;
  ctx.body = &body;
  ctx.p = p;
  ctx.delta = delta;
  ctx.lambda = lambda;
  ctx.bounds = f.smoothness_bounds();
  if (!ctx.bounds.a_exact) ctx.bounds.a *= kSafety;
  if (!ctx.bounds.b_exact) ctx.bounds.b *= kSafety;
  require(std::isfinite(ctx.bounds.a) && std::isfinite(ctx.bounds.b), "claims: bounds must be finite");
  return ctx;
}

double claim1_radius(const ClaimContext& ctx, const Vec& x, const Vec& omega) {
  const double g = std::abs(ctx.f->gradient(x).dot(omega));
  if (!(g > 0.0)) fail(ErrorCode::zero_directional_derivative, "claim 1: grad f(x) . w = 0");
  const int n = ctx.f->dimension();
  const double p = ctx.p;
  const double w = ctx.body->gauge(omega);
  const double near = ctx.bounds.b > 0.0 ? ctx.delta * g / ctx.bounds.b : kInf;
  const double far = std::pow((1.0 - ctx.delta) * g / ctx.lambda, p / n) / std::pow(w, (n + p) / n);
  return std::min(near, far);
}

double claim2_radius(const ClaimContext& ctx, const Vec& x, const Vec& omega) {
  const int n = ctx.f->dimension();
  const double p = ctx.p;
  const double g = std::abs(ctx.f->gradient(x).dot(omega));
  const double w = ctx.body->gauge(omega);
  const double e = n / p + 1.0;
  const double reach = std::pow(ctx.bounds.a / (ctx.lambda * std::pow(w, e)), p / n);
  const double inner = g + ctx.bounds.b * reach;
  return std::pow(inner / ctx.lambda, p / n) / std::pow(w, (n + p) / n);
}

ClaimReport claim1_verify(const ClaimContext& ctx, const Vec& x, const Vec& omega,
                          int t_samples) {
  require(t_samples >= 1, "claim 1: need at least one sample");
  const double r = claim1_radius(ctx, x, omega);
  const double e = ctx.f->dimension() / ctx.p + 1.0;
  const double w = ctx.body->gauge(omega);
  const Ray ray = ctx.f->ray(x, omega);
  ClaimReport rep;
  rep.claim = "claim1";
  for (int k = 1; k <= t_samples; ++k) {
    const double s = r * k / t_samples;
    const double need = ctx.lambda * std::pow(s * w, e);
    record(rep, (std::abs(ray.diff(s)) - need) / need, x, omega, s);
    ++rep.tested;
  }
  rep.verdict = rep.counterexamples.empty() ? Verdict::pass : Verdict::fail;
  return rep;
}

ClaimReport claim2_verify(const ClaimContext& ctx, const Claim2Options& options) {
  const TestFunction& f = *ctx.f;
  const int n = f.dimension();
  const double e = n / ctx.p + 1.0;
  const double floor = ctx.bounds.a * std::pow(ctx.body->circumradius(), e);
  require(ctx.lambda > floor, "claim 2: lambda must exceed a * circumradius^{n/p+1}");
  const Domain source = grown(f.sampling_domain(), options.dilation);
  // Any member has lambda (t ||theta||)^e <= osc f.
  const double reach = std::pow(f.oscillation() / ctx.lambda, 1.0 / e);

  ClaimReport rep;
  rep.claim = "claim2";
  Philox rng(options.seed, stream_id(streams::claim2, 0));
  while (rep.tested < options.target_pairs && rep.attempts < options.budget) {
    ++rep.attempts;
    const Vec x = source.sample(rng);
    const Vec theta = random_direction(n, rng);
    const double w = ctx.body->gauge(theta);
    const double t = reach / w * (1.0 - rng.uniform());
    const double need = ctx.lambda * std::pow(t * w, e);
    if (!(std::abs(f.ray(x, theta).diff(t)) >= need)) continue;
    ++rep.tested;
    const double big_r = claim2_radius(ctx, x, theta);
    const double margin = std::min((big_r - t) / big_r, 1.0 - support_distance(f, x));
    record(rep, margin, x, theta, t);
  }
  if (!rep.counterexamples.empty()) rep.verdict = Verdict::fail;
  else if (rep.tested < options.min_pairs) rep.verdict = Verdict::inconclusive;
  else rep.verdict = Verdict::pass;
  return rep;
}

ClaimReport claim1_suite(const TestFunction& f, const ConvexBody& body, double p,
                         const ClaimSuiteOptions& options) {
  const int n = f.dimension();
  const double a = f.smoothness_bounds().a;
  ClaimReport total;
  total.claim = "claim1";
  total.verdict = Verdict::pass;
  if (!(a > 0.0)) {
    total.verdict = Verdict::inconclusive;  // f = 0: no admissible direction
    return total;
  }
  Philox rng(options.seed, stream_id(streams::claim1, 0));
  const double e = n / p + 1.0;
  for (double delta : options.deltas) {
    for (double factor : options.lambda_factors) {
      const ClaimContext ctx = make_claim_context(f, body, p, delta, factor * a);
      std::size_t done = 0;
      while (done < options.configs) {
        ++total.attempts;
        const Vec x = f.support().sample(rng);
        const Vec omega = random_direction(n, rng);
        const double u = 1.0 - rng.uniform();
        if (!(std::abs(f.gradient(x).dot(omega)) > 0.0)) continue;
        const double s = claim1_radius(ctx, x, omega) * u;
        const double w = body.gauge(omega);
        const double need = ctx.lambda * std::pow(s * w, e);
        record(total, (std::abs(f.ray(x, omega).diff(s)) - need) / need, x, omega, s);
        ++done;
      }
      total.tested += done;
    }
  }
  if (!total.counterexamples.empty()) total.verdict = Verdict::fail;
  return total;
}

ClaimReport claim2_suite(const TestFunction& f, const ConvexBody& body, double p,
                         const ClaimSuiteOptions& options, const Claim2Options& pair_options) {
  const int n = f.dimension();
  const double a = f.smoothness_bounds().a;
  ClaimReport total;
  total.claim = "claim2";
  if (!(a > 0.0)) return total;  // f = 0 has no members
  const double floor = a * std::pow(body.circumradius(), n / p + 1.0);
  total.verdict = Verdict::pass;
  std::uint64_t index = 0;
  for (double factor : options.lambda_factors) {
    const ClaimContext ctx = make_claim_context(f, body, p, 0.5, factor * floor);
    Claim2Options opts = pair_options;
    opts.seed = options.seed + 0x9e3779b97f4a7c15ULL * ++index;
    const ClaimReport part = claim2_verify(ctx, opts);
    merge(total, part);
    total.verdict = combine(total.verdict, part.verdict);
  }
  return total;
}

M1Report m1_sandwich(const TestFunction& f, const ConvexBody& body, double p, double lambda,
                     double r, const LevelSetOptions& options) {
  require(r > 0.0 && std::isfinite(r), "m1: r must be positive");
  require(lambda > 0.0 && std::isfinite(lambda), "m1: lambda must be positive");
  if (support_gauge(f, body) > r)
    fail(ErrorCode::support_not_contained, "m1: supp f is not contained in r K");
  const int n = f.dimension();
  const double vol = body.volume().value;

  M1Report rep;
  rep.lambda = lambda;
  rep.r = r;
  rep.center = vol * std::pow(lambda, -p) * f.lp_norm_pow(p);
  rep.slack = vol * vol * std::pow(r, 2 * n);

  LevelSetQuery q{&f, &body, p, LevelSetKind::part_b, lambda, options};
  q.options.upper_half = true;
  rep.upper_half = levelset_measure(q);
  q.options.upper_half = false;
  rep.full = levelset_measure(q);

  const double h = rep.upper_half.value, se = rep.upper_half.std_error;
  rep.sandwich_holds = h >= rep.center - rep.slack - 3.0 * se && h <= rep.center + rep.slack + 3.0 * se;
  const double joint = std::hypot(rep.full.std_error, 2.0 * se);
  rep.doubling_holds = std::abs(rep.full.value - 2.0 * h) <= 3.0 * joint + 1e-12 * std::abs(rep.full.value);
  rep.verdict = rep.sandwich_holds && rep.doubling_holds ? Verdict::pass : Verdict::fail;
  return rep;
}

HolderReport holder_chain_check(const TestFunction& f, double p, std::size_t segments,
                                std::uint64_t seed) {
  require(p >= 1.0 && std::isfinite(p), "holder: p must be >= 1");
  if (!f.differentiable())
    fail(ErrorCode::gradient_unavailable, "holder: f must be differentiable");
  const Domain source = grown(f.sampling_domain(), 0.5);
  Philox rng(seed, stream_id(streams::holder, 0));
  HolderReport rep;
  for (std::size_t i = 0; i < segments; ++i) {
    const Vec x = source.sample(rng);
    const Vec y = source.sample(rng);
    const double len = (y - x).norm();
    if (!(len > 0.0)) continue;
    const Vec omega = (y - x) / len;
    const double lhs = std::abs(f.ray(x, omega).diff(len));

    std::vector<double> cuts{0.0};
    if (auto chord = f.support().line_chord(x, omega)) {
      for (double c : {chord->lo, chord->hi})
        if (c > 0.0 && c < len) cuts.push_back(c);
    }
    cuts.push_back(len);
    std::sort(cuts.begin(), cuts.end());
    const auto integrand = [&](double s) {
      return std::pow(std::abs(f.gradient(x + s * omega).dot(omega)), p);
    };
    const double integral = integrate_piecewise(integrand, cuts, 1e-12).value;
    const double rhs = std::pow(len, 1.0 - 1.0 / p) * std::pow(integral, 1.0 / p);
    const double slack = rhs - lhs;
    rep.worst_slack = std::min(rep.worst_slack, slack);
    if (slack < -1e-10) ++rep.violations;
    ++rep.tested;
  }
  rep.verdict = rep.tested == 0 ? Verdict::inconclusive
                : rep.violations == 0 ? Verdict::pass
                                      : Verdict::fail;
  return rep;
}

}  // namespace anisolab
