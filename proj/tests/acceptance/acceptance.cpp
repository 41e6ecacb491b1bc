// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "anisolab/cli/report.hpp"
#include "anisolab/core/error.hpp"
#include "anisolab/core/quadrature.hpp"
#include "anisolab/core/special.hpp"
#include "anisolab/estimators/certificates.hpp"
#include "anisolab/estimators/gagliardo.hpp"
#include "anisolab/estimators/level_set.hpp"
#include "anisolab/estimators/line_geometry.hpp"

using namespace anisolab;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

double rel(double value, double ref) { return std::abs(value - ref) / std::abs(ref); }

// Collects sub-check results and a one-line summary for a criterion.
class Criterion {
 public:
  void check(bool ok, const std::string& what) {
    ok_ = ok_ && ok;
    if (!ok) failed_.push_back(what);
    notes_ << (notes_.tellp() > 0 ? "; " : "") << what;
  }
  bool ok() const { return ok_; }
  std::string notes() const { return notes_.str(); }
  std::string failures() const {
    std::string s;
    for (const auto& f : failed_) s += (s.empty() ? "" : "; ") + f;
    return s;
  }

 private:
  bool ok_ = true;
  std::ostringstream notes_;
  std::vector<std::string> failed_;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const ConvexBody& segment() {
  static const ConvexBody k = ConvexBody::box(v1(1.0));
  return k;
}

const TestFunction& unit_indicator() {
  static const TestFunction f = TestFunction::indicator_box(v1(0), v1(1));
  return f;
}

const TestFunction& cubic_bump() {
  static const TestFunction f = TestFunction::poly_bump(v1(0), 1.0, 3);
  return f;
}

LevelSetOptions mc_options(std::size_t samples, std::uint64_t seed = 1) {
  LevelSetOptions o;
  o.mc.samples = samples;
  o.mc.seed = seed;
  return o;
}

void c1(Criterion& c) {
  for (double s : {0.25, 0.5, 0.75}) {
    const double v = seminorm({&unit_indicator(), &segment(), 1.0, s, {}}).value;
    const double ref = 4.0 / (s * (1 - s));
    c.check(rel(v, ref) <= 0.01, fmt("s=%g seminorm %.6g vs %.6g", s, v, ref));
  }
  const SweepTable t = ms_sweep(unit_indicator(), segment(), 1.0, default_ms_grid());
  const double x = t.extrapolated ? t.extrapolated->value : NAN;
  c.check(rel(x, 4.0) <= 0.02, fmt("ms extrapolation %.6g vs 4", x));
}

void c2(Criterion& c) {
  const LevelSetOptions opt = mc_options(1000000);
  const SweepTable t = limit_sweep_small_lambda(unit_indicator(), segment(), 1.0, {0.5, 0.1, 0.01}, opt);
  for (const SweepRow& row : t.rows) {
    const double exact = 4 - 2 * row.param;
    c.check(rel(row.value, exact) <= 0.02, fmt("lambda=%g: %.6g vs %.6g", row.param, row.value, exact));
  }
  const double ref = 2 * segment().volume().value * unit_indicator().lp_norm_pow(1.0);
  c.check(ref == 4.0 && rel(t.rows.back().value, ref) <= 0.02,
          fmt("limit reference %.6g, smallest-lambda value %.6g", ref, t.rows.back().value));
}

void c3(Criterion& c) {
  const SandwichReport r = sandwich_check(unit_indicator(), segment(), 1.0, LevelSetKind::part_b,
                                          log_grid(1e-4, 1.0, 16), mc_options(100000));
  const double q = r.quasinorm.estimate.value;
  c.check(q >= 4.0 && q <= 16.0, fmt("quasinorm %.6g in [4, 16]", q));
  c.check(r.lower == 4.0 && r.upper == 8.0 && r.verdict == Verdict::pass,
          fmt("module bounds [%g, %g] verdict pass", r.lower, r.upper));
  c.check(rel(q, 4.0) <= 0.03, fmt("quasinorm %.6g equals 4 within 3%%", q));
}

void c4(Criterion& c) {
  const LevelSetOptions opt = mc_options(50000);
  const std::vector<double> grid = log_grid(10.0, 1e4, 4);
  const SweepTable t = limit_sweep_large_lambda(cubic_bump(), segment(), 2.0, grid, opt);
  const SweepRow& last = t.rows.back();
  const double exact = 18432.0 / 3465.0;
  c.check(rel(last.reference, exact) <= 1e-10, fmt("reference %.10g vs %.10g", last.reference, exact));
  c.check(rel(last.value, exact) <= 0.10, fmt("lambda=%g value %.6g vs %.6g", last.param, last.value, exact));

  // K = B^1 through the ball code path against (1/n) k(p, n) ||f'||_p^p.
  const ConvexBody b1 = ConvexBody::ball(1);
  const QuadResult d = integrate_adaptive(
      [](double x) {
        const double g = cubic_bump().gradient(v1(x))[0];
        return g * g;
      },
      -1.0, 1.0, 1e-13);
  const double ball_ref = k_constant(2.0, 1) * d.value;
  LevelSetQuery q{&cubic_bump(), &b1, 2.0, LevelSetKind::part_a, grid.back(), opt};
  const Estimate m = levelset_measure(q);
  const double scaled = grid.back() * grid.back() * m.value;
  const double tol = 0.10 * ball_ref + 3 * grid.back() * grid.back() * m.std_error;
  c.check(std::abs(scaled - ball_ref) <= tol, fmt("B^1: %.6g vs (1/n)k||f'||^p = %.6g", scaled, ball_ref));
  c.check(rel(ball_ref, exact) <= 1e-10, fmt("B^1 reference %.10g", ball_ref));
}

void c5(Criterion& c) {
  const SweepTable t = bbm_sweep(cubic_bump(), segment(), 2.0, {0.95, 0.99});
  const SweepRow& last = t.rows.back();
  const double exact = 9216.0 / 3465.0;
  c.check(rel(last.value, exact) <= 0.10, fmt("s=0.99 value %.6g vs %.6g", last.value, exact));

  const ConvexBody sq = ConvexBody::box(Vec::Ones(2));
  const TestFunction f2 = TestFunction::poly_bump(Vec::Zero(2), 1.0, 3);
  const Vec z = v2(0.3, -1.7);
  const double mn = moment_norm_p({&sq, 2.0}, z).value;
  c.check(rel(mn, 8.0 / 3.0 * z.squaredNorm()) <= 1e-12, fmt("square moment norm %.12g vs (8/3)|z|^2", mn));
  const double dirichlet = integrate_domain(f2.sampling_domain(), [&](const Vec& x) { return f2.gradient(x).squaredNorm(); }, 1e-11);
  SeminormQuadrature quad;
  quad.method = SeminormMethod::monte_carlo;
  quad.mc.samples = 20000;
  quad.mc.seed = 1;
  const SweepTable t2 = bbm_sweep(f2, sq, 2.0, {0.95, 0.99}, quad);
  const double ref2 = 8.0 / 3.0 * dirichlet;
  c.check(rel(t2.rows.back().reference, ref2) <= 1e-8, fmt("n=2 reference %.8g vs (8/3) int |grad f|^2 = %.8g", t2.rows.back().reference, ref2));
  c.check(rel(t2.rows.back().value, ref2) <= 0.10, fmt("n=2 s=0.99 value %.6g", t2.rows.back().value));
}

void c6(Criterion& c) {
  const ConvexBody b2 = ConvexBody::ball(2);
  c.check(std::abs(k_constant(2.0, 2) - std::numbers::pi) <= 1e-12, fmt("k(2,2) = %.15g", k_constant(2.0, 2)));
  c.check(std::abs(k_constant(1.0, 2) - 4.0) <= 1e-12, fmt("k(1,2) = %.15g", k_constant(1.0, 2)));
  const Vec z = v2(0.6, -1.1);
  for (double p : {1.0, 2.0}) {
    MomentNormSpec spec{&b2, p, MomentEstimator::monte_carlo};
    spec.mc.samples = 1000000;
    spec.mc.seed = 6;
    const Estimate e = moment_norm_p(spec, z);
    const double exact = k_constant(p, 2) * std::pow(z.norm(), p) / 2;
    c.check(std::abs(e.value - exact) <= 3 * e.std_error, fmt("p=%g MC %.6g vs %.6g", p, e.value, exact));
  }
}

void c7(Criterion& c) {
  McConfig mc;
  mc.samples = 100000;
  mc.seed = 7;
  const Estimate d = bp_integrate(unit_disk_pairs(), 2, 1.0, mc);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  c.check(std::abs(d.value - pi2) <= 3 * d.std_error, fmt("disks %.6g +- %.2g vs pi^2", d.value, d.std_error));
  const Estimate s = bp_integrate(unit_square_pairs(), 2, std::sqrt(2.0), mc);
  c.check(std::abs(s.value - 16.0) <= 3 * s.std_error, fmt("squares %.6g +- %.2g vs 16", s.value, s.std_error));
}

void c8(Criterion& c) {
  const LineFunction F{[](double x) { return x >= 0 && x <= 1 ? 1.0 : 0.0; }, {0.0, 1.0}};
  const LineFunction F2{[](double x) { return x >= 0 && x <= 1 ? 2.0 : 0.0; }, {0.0, 1.0}};
  for (double gamma : {0.5, 1.0, 2.0}) {
    const double once = e_set_measure_1d(F, gamma);
    const double twice = e_set_measure_1d(F2, gamma);
    const double ratio = prop21_ratio(F, gamma);
    c.check(std::isfinite(once) && twice >= once && ratio <= 100.0,
            fmt("gamma=%g measure %.6g, doubled %.6g", gamma, once, twice) + fmt(", ratio %.4g", ratio));
  }
}

void c9(Criterion& c) {
  struct Instance {
    TestFunction f;
    ConvexBody k;
    double p;
  };
  const std::vector<Instance> instances{
      {TestFunction::poly_bump(v1(0), 1.0, 3), segment(), 2.0},
      {TestFunction::gaussian(Vec::Zero(2), 0.5), ConvexBody::ball(2), 1.5},
  };
  ClaimSuiteOptions opt;
  opt.configs = 1000;
  opt.seed = 9;
  for (const Instance& in : instances) {
    const ClaimReport a = claim1_suite(in.f, in.k, in.p, opt);
    c.check(a.verdict == Verdict::pass && a.counterexamples.empty() && a.tested >= 1000,
            in.f.describe() + ": claim 1 " + std::to_string(a.tested) + " triples, " +
                std::to_string(a.counterexamples.size()) + " counterexamples");
    const ClaimReport b = claim2_suite(in.f, in.k, in.p, opt);
    c.check(b.verdict == Verdict::pass && b.counterexamples.empty() && b.tested >= 1000,
            in.f.describe() + ": claim 2 " + std::to_string(b.tested) + " pairs, " +
                std::to_string(b.counterexamples.size()) + " counterexamples");
  }

  const ConvexBody sq = ConvexBody::box(Vec::Ones(2));
  const TestFunction f2 = TestFunction::poly_bump(Vec::Zero(2), 1.0, 3);
  for (double lambda : {1.0, 0.1, 0.01}) {
    const M1Report a = m1_sandwich(unit_indicator(), segment(), 1.0, lambda, 1.0, mc_options(100000));
    c.check(a.verdict == Verdict::pass, fmt("m1 indicator lambda=%g H+ %.6g center %.6g", lambda, a.upper_half.value, a.center));
    const M1Report b = m1_sandwich(f2, sq, 2.0, lambda, 1.0, mc_options(100000));
    c.check(b.verdict == Verdict::pass, fmt("m1 bump n=2 lambda=%g H+ %.6g center %.6g", lambda, b.upper_half.value, b.center));
  }
}

void c10(Criterion& c) {
  const TestFunction tri = TestFunction::triangle(0.0, 1.0);
  struct Instance {
    const TestFunction* f;
    double p;
    LevelSetKind kind;
    double lambda;
    const char* name;
  };
  for (const Instance& in : {Instance{&unit_indicator(), 1.0, LevelSetKind::part_b, 0.2, "indicator b"},
                             Instance{&cubic_bump(), 2.0, LevelSetKind::part_a, 3.0, "bump a"},
                             Instance{&tri, 1.5, LevelSetKind::part_b, 0.3, "triangle b"}}) {
    const LevelSetQuery q{in.f, &segment(), in.p, in.kind, in.lambda, mc_options(200000, 10)};
    const double grid = levelset_measure_bruteforce(q, 4000).measure;
    const double mc = levelset_measure(q).value;
    c.check(rel(mc, grid) <= 0.02, std::string(in.name) + fmt(": MC %.6g grid %.6g", mc, grid));
  }
}

void c11(Criterion& c) {
  for (const char* suite : {"small-lambda", "claims", "m1"}) {
    ExperimentConfig cfg = parse_config(builtin_suite_config(suite));
    cfg = with_override(cfg, "output.timing", "false");
    const std::string a = emit(run_experiment(cfg), OutputFormat::json);
    const std::string b = emit(run_experiment(cfg), OutputFormat::json);
    cfg.threads = 4;
    const std::string d = emit(run_experiment(cfg), OutputFormat::json);
    c.check(a == b && a == d, std::string(suite) + " reports byte-identical");
  }

  // Central differences with step 1e-5 against the analytic gradient.
  Philox rng(11, 11);
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    Vec ctr = Vec::Zero(n);
    ctr[0] = 0.1;
    for (const TestFunction& f : {TestFunction::poly_bump(ctr, 1.2, 3), TestFunction::poly_bump(ctr, 0.8, 6),
                                  TestFunction::smooth_bump(ctr, 1.0), TestFunction::gaussian(ctr, 0.6)}) {
      const double floor = 1e-2 * f.smoothness_bounds().a;
      for (int i = 0; i < 200; ++i) {
        const Vec x = f.sampling_domain().center() + f.sampling_domain().radius() * 0.95 * random_in_unit_ball(n, rng);
        const Vec g = f.gradient(x);
        Vec fd(n);
        for (int j = 0; j < n; ++j) {
          const double h = 1e-5;
          Vec xp = x, xm = x;
          xp[j] += h;
          xm[j] -= h;
          fd[j] = (f.evaluate(xp) - f.evaluate(xm)) / (2 * h);
        }
        worst = std::max(worst, (fd - g).norm() / std::max(g.norm(), floor));
      }
    }
  }
  c.check(worst <= 1e-6, fmt("gradient finite differences worst relative error %.2g", worst));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Criterion&)>>> criteria{
      {"small-s limit closed form", c1},        {"small-lambda limit curve", c2},
      {"weak quasinorm sandwich", c3},          {"large-lambda limit", c4},
      {"s near 1 limit", c5},                   {"moment body consistency", c6},
      {"line decomposition identity", c7},      {"one-dimensional E-set oracle", c8},
      {"certificate suites", c9},               {"Monte Carlo vs grid", c10},
      {"determinism and gradients", c11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("CRITERION %zu %s: %s (%.1fs) %s\n", i + 1, criteria[i].first, c.ok() ? "PASS" : "FAIL", secs,
                c.ok() ? c.notes().c_str() : c.failures().c_str());
    std::fflush(stdout);
    failures += c.ok() ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
