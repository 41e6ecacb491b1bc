#include "anisolab/estimators/level_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "anisolab/core/error.hpp"
#include "anisolab/core/special.hpp"
#include "anisolab/core/streams.hpp"
#include "anisolab/simd/kernels.hpp"

namespace anisolab {

const char* to_string(LevelSetKind k) { return k == LevelSetKind::part_a ? "part-a" : "part-b"; }

double gauge_exponent(LevelSetKind kind, int n, double p) {
  return kind == LevelSetKind::part_a ? n / p + 1.0 : n / p;
}

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

void validate(const LevelSetQuery& q) {
  require(q.f != nullptr && q.body != nullptr, "levelset: function and body required");
  require(q.f->dimension() == q.body->dimension(), "levelset: dimension mismatch");
  require(q.p >= 1.0 && std::isfinite(q.p), "levelset: p must be >= 1");
  require(q.lambda > 0.0 && std::isfinite(q.lambda), "levelset: lambda must be positive");
  require(q.options.subdivisions >= 4, "levelset: at least 4 subdivisions per ray");
  if (q.kind == LevelSetKind::part_a)
    require(q.f->differentiable(), "levelset: part a needs a differentiable function");
}

// Relative t-grid on (0, 1]: half geometric from 1e-9, half uniform.
std::vector<double> relative_grid(int subdivisions) {
  const int half = subdivisions / 2;
  const double first_uniform = 1.0 / half;
  std::vector<double> g;
  g.reserve(subdivisions + 1);
  const double ratio = std::pow(first_uniform / 1e-9, 1.0 / half);
  double t = 1e-9;
  for (int k = 0; k < half; ++k, t *= ratio) g.push_back(t);
  for (int k = 1; k <= half; ++k) g.push_back(static_cast<double>(k) / half);
  return g;
}

class RayScanner {
 public:
  RayScanner(const LevelSetQuery& q)
      : q_(q),
        f_(*q.f),
        body_(*q.body),
        dom_(q.f->sampling_domain()),
        n_(q.f->dimension()),
        e_(gauge_exponent(q.kind, n_, q.p)),
        weight_out_(q.options.upper_half ? 1.0 : 2.0),
        constant_(q.f->constant_on_sampling_domain()),
        rel_(relative_grid(q.options.subdivisions)),
        osc_(q.f->oscillation()),
        mask_(&simd::kernels().threshold_mask) {
    if (q.kind == LevelSetKind::part_a) {
      const SmoothnessBounds sb = f_.smoothness_bounds();
      lipschitz_ = sb.a_exact ? sb.a : 1.01 * sb.a;
    }
    values_.resize(rel_.size());
    ts_.resize(rel_.size());
    member_.resize(rel_.size());
  }

  double exponent() const { return e_; }

  // Measure contribution of the ray from x in direction theta, minus the
  // control-variate term when `cv` is set.
  double operator()(const Vec& x, const Vec& theta, bool cv) {
    const double g = body_.gauge(theta);
    const Ray ray = f_.ray(x, theta);
    const double f0 = ray.value0();
    const double T = dom_.exit_time(x, theta);
    double total = 0.0;
    if (f0 != 0.0) {
      // Beyond T, f(y) = 0 and membership reads |f0| >= lambda (t g)^e.
      const double t_star = std::pow(std::abs(f0) / q_.lambda, 1.0 / e_) / g;
      if (!(t_star <= q_.options.max_radius))
        fail(ErrorCode::infinite_measure,
             "levelset: exterior section reaches t = " + std::to_string(t_star) + " beyond the radius bound");
      if (t_star > T) total += weight_out_ * (ipow(t_star, n_) - ipow(T, n_)) / n_;
      if (cv) total -= weight_out_ * ipow(t_star, n_) / n_;
    }
    if (!constant_ && T > 0.0) total += interior(ray, x, theta, g, T);
    return total;
  }

 private:
  bool member(const Ray& ray, double t, double g) const {
    return std::abs(ray.diff(t)) / std::pow(t * g, e_) >= q_.lambda;
  }

  double crossing(const Ray& ray, double lo, double hi, double g) const {
    const bool lo_state = member(ray, lo, g);
    while (hi - lo > 1e-10 * hi) {
      const double mid = 0.5 * (lo + hi);
      (member(ray, mid, g) == lo_state ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // First t > 0 with ||x + t theta||_K > ||x||_K (convex in t).
  double upper_half_start(const Vec& x, const Vec& theta, double g) const {
    const double g0 = body_.gauge(x);
    if (g0 == 0.0) return 0.0;
    auto phi = [&](double t) { return body_.gauge(x + t * theta); };
    double lo = 0.0, hi = 2.0 * g0 / g;
    constexpr double inv_golden = 0.6180339887498949;
    double a = hi - inv_golden * (hi - lo), b = lo + inv_golden * (hi - lo);
    double fa = phi(a), fb = phi(b);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (2.0 * g0 / g); ++it) {
      if (fa < fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - inv_golden * (hi - lo);
        fa = phi(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + inv_golden * (hi - lo);
        fb = phi(b);
      }
    }
    double left = 0.5 * (lo + hi);
    if (!(phi(left) < g0)) return 0.0;
    double right = 2.0 * g0 / g;
    while (right - left > 1e-13 * right) {
      const double mid = 0.5 * (left + right);
      (phi(mid) > g0 ? right : left) = mid;
    }
    return right;
  }

  double interior(const Ray& ray, const Vec& x, const Vec& theta, double g, double T) {
    double U = std::min(T, std::pow(osc_ / q_.lambda, 1.0 / e_) / g);
    if (q_.kind == LevelSetKind::part_a)
      U = std::min(U, std::pow(lipschitz_ / (q_.lambda * std::pow(g, e_)), 1.0 / (e_ - 1.0)));
    const double t0 = q_.options.upper_half ? upper_half_start(x, theta, g) : 0.0;
    if (!(U > t0)) return 0.0;

    const std::size_t m = rel_.size();
    for (std::size_t k = 0; k < m; ++k) {
      ts_[k] = U * rel_[k];
      values_[k] = std::abs(ray.diff(ts_[k])) / std::pow(ts_[k] * g, e_);
    }
    (*mask_)(values_.data(), m, q_.lambda, member_.data());

    double sum = 0.0;
    auto add = [&](double a, double b) {
      a = std::max(a, t0);
      if (b > a) sum += (ipow(b, n_) - ipow(a, n_)) / n_;
    };
    // The first grid point's state is taken to hold down to t = 0.
    double start = member_[0] ? 0.0 : -1.0;
    for (std::size_t k = 1; k < m; ++k) {
      if (member_[k] == member_[k - 1]) continue;
      const double c = crossing(ray, ts_[k - 1], ts_[k], g);
      if (member_[k - 1]) {
        add(start, c);
        start = -1.0;
      } else {
        start = c;
      }
    }
    if (start >= 0.0) add(start, U);
    return sum;
  }

  const LevelSetQuery& q_;
  const TestFunction& f_;
  const ConvexBody& body_;
  const Domain& dom_;
  int n_;
  double e_;
  double weight_out_;
  bool constant_;
  std::vector<double> rel_;
  double osc_;
  double lipschitz_ = kInf;
  const simd::ThresholdMaskFn* mask_;
  std::vector<double> values_, ts_;
  std::vector<std::uint8_t> member_;
};

bool control_variate_exact(const LevelSetQuery& q) {
  return q.kind == LevelSetKind::part_b && q.options.control_variate &&
         q.body->volume().std_error == 0.0 &&
         (q.f->kind() != FunctionKind::truncated || q.f->dimension() <= 3);
}

}  // namespace

Estimate levelset_measure(const LevelSetQuery& q) {
  validate(q);
  if (q.f->kind() == FunctionKind::zero) return Estimate{0.0, 0.0, q.options.mc.samples, q.options.mc.seed};
  const TestFunction& f = *q.f;
  const Domain& dom = f.sampling_domain();
  const int n = f.dimension();
  const bool cv = control_variate_exact(q);
  const double scale = dom.volume() * unit_sphere_area(n);

  Estimate est = mc_mean(q.options.mc, streams::level_set, [&](Philox& rng, std::size_t count) {
    RayScanner scan(q);
    CompensatedSum sum;
    for (std::size_t i = 0; i < count; ++i) {
      const Vec x = dom.sample(rng);
      // n = 1 enumerates both directions; otherwise an antithetic pair.
      const Vec theta = n == 1 ? Vec::Ones(1) : random_direction(n, rng);
      const Vec back = -theta;
      sum.add(0.5 * scale * (scan(x, theta, cv) + scan(x, back, cv)));
    }
    return sum.value();
  });
  if (cv) {
    const double weight = q.options.upper_half ? 1.0 : 2.0;
    est.value += weight * q.body->volume().value * std::pow(q.lambda, -q.p) * f.lp_norm_pow(q.p);
  }
  est.value = std::max(est.value, 0.0);
  return est;
}

GridMeasure levelset_measure_bruteforce(const LevelSetQuery& q, int resolution,
                                        std::optional<Interval> window) {
  validate(q);
  require(q.f->dimension() == 1, "levelset bruteforce: n = 1 only");
  require(resolution >= 16, "levelset bruteforce: resolution too small");
  const TestFunction& f = *q.f;
  const double e = gauge_exponent(q.kind, 1, q.p);
  const double g = q.body->gauge(Vec::Ones(1));
  GridMeasure out;
  if (!window) {
    const std::optional<Interval> supp = f.sampling_domain().line_chord(Vec::Zero(1), Vec::Ones(1));
    const double reach = std::pow(std::max(f.oscillation(), f.sup_abs()) / q.lambda, 1.0 / e) / g;
    const double pad = 1.05 * reach + 1e-9 * (supp->hi - supp->lo);
    window = Interval{supp->lo - pad, supp->hi + pad};
  }
  out.window = *window;
  const int m = resolution;
  const double h = window->length() / m;
  std::vector<double> fv(m), thr(m);
  for (int i = 0; i < m; ++i) {
    Vec x(1);
    x[0] = window->lo + (i + 0.5) * h;
    fv[i] = f.evaluate(x);
    thr[i] = q.lambda * std::pow(i * h * g, e);
  }
  std::uint64_t upper = 0, lower = 0, diagonal = 0;
  bool boundary_hit = false;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int k = j > i ? j - i : i - j;
      // Diagonal cells borrow the state of their neighbour (x = y is excluded).
      const bool in = k == 0 ? (i + 1 < m ? std::abs(fv[i] - fv[i + 1]) >= thr[1] : false)
                             : std::abs(fv[i] - fv[j]) >= thr[k];
      if (!in) continue;
      if (i == 0 || j == 0 || i == m - 1 || j == m - 1) boundary_hit = true;
      if (k == 0) ++diagonal;
      else if (j > i) ++upper;
      else ++lower;
    }
  }
  if (boundary_hit)
    fail(ErrorCode::window_too_small, "levelset bruteforce: the set touches the window boundary");
  const double cell = h * h;
  out.upper = (upper + 0.5 * diagonal) * cell;
  out.lower = (lower + 0.5 * diagonal) * cell;
  out.measure = out.upper + out.lower;
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  require(lo > 0.0 && hi > lo && points_per_decade >= 1, "log_grid: need 0 < lo < hi");
  const int steps = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo) * points_per_decade - 1e-9)));
  std::vector<double> g(steps + 1);
  for (int k = 0; k <= steps; ++k) g[k] = lo * std::pow(hi / lo, static_cast<double>(k) / steps);
  g.back() = hi;
  return g;
}

std::vector<double> default_lambda_grid(LevelSetKind kind, const TestFunction& f, const ConvexBody& body,
                                        double p, int points_per_decade) {
  if (kind == LevelSetKind::part_b) return log_grid(1e-4, 1.0, points_per_decade);
  const double e = gauge_exponent(kind, f.dimension(), p);
  const double a = f.kind() == FunctionKind::zero ? 1.0 : f.smoothness_bounds().a;
  const double scale = a * std::pow(body.circumradius(), e);
  return log_grid(1e2 * scale, 1e5 * scale, points_per_decade);
}

namespace {

Estimate scaled_measure(const TestFunction& f, const ConvexBody& body, double p, LevelSetKind kind,
                        double lambda, const LevelSetOptions& options, SweepRow* row) {
  const Estimate mu = levelset_measure(LevelSetQuery{&f, &body, p, kind, lambda, options});
  const double lp = std::pow(lambda, p);
  if (row) {
    row->param = lambda;
    row->value = lp * mu.value;
    row->std_error = lp * mu.std_error;
    row->raw = mu.value;
    row->raw_std_error = mu.std_error;
  }
  return Estimate{lp * mu.value, lp * mu.std_error, mu.samples, mu.seed};
}

}  // namespace

QuasinormResult weak_quasinorm(const TestFunction& f, const ConvexBody& body, double p, LevelSetKind kind,
                               const std::vector<double>& lambdas, const LevelSetOptions& options) {
  require(lambdas.size() >= 16, "weak_quasinorm: at least 16 grid points required");
  std::vector<double> grid = lambdas;
  std::sort(grid.begin(), grid.end());
  QuasinormResult out;
  std::vector<Estimate> values;
  for (double l : grid) {
    SweepRow row;
    values.push_back(scaled_measure(f, body, p, kind, l, options, &row));
    out.rows.push_back(row);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i].value > values[best].value) best = i;
  out.argmax_at_boundary = best == 0 || best + 1 == grid.size();
  out.estimate = values[best];
  out.argmax = grid[best];

  // One refinement pass between the argmax's neighbours.
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[best + 1 == grid.size() ? best : best + 1];
  for (int k = 1; k < 8; ++k) {
    const double l = lo * std::pow(hi / lo, k / 8.0);
    if (l == grid[best]) continue;
    SweepRow row;
    const Estimate v = scaled_measure(f, body, p, kind, l, options, &row);
    out.rows.push_back(row);
    if (v.value > out.estimate.value) {
      out.estimate = v;
      out.argmax = l;
    }
  }
  // The supremum also covers the one-sided limit past a boundary argmax,
  // linear in lambda toward 0 or in 1/lambda toward infinity.
  if (out.argmax_at_boundary && grid.size() >= 2) {
    const std::size_t last = grid.size() - 1;
    const Estimate limit = best == 0
        ? extrapolate_linear(grid[0], values[0], grid[1], values[1], 0.0)
        : extrapolate_linear(1.0 / grid[last], values[last], 1.0 / grid[last - 1], values[last - 1], 0.0);
    if (limit.value > out.estimate.value) {
      out.estimate = limit;
      out.argmax = best == 0 ? 0.0 : kInf;
    }
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.param < b.param; });
  return out;
}

namespace {

SweepTable lambda_sweep(const TestFunction& f, const ConvexBody& body, double p, LevelSetKind kind,
                        std::vector<double> lambdas, const LevelSetOptions& options, double reference) {
  require(lambdas.size() >= 2, "limit sweep: at least two lambda values required");
  const bool large = kind == LevelSetKind::part_a;
  std::sort(lambdas.begin(), lambdas.end());
  if (!large) std::reverse(lambdas.begin(), lambdas.end());
  SweepTable table;
  std::vector<Estimate> scaled;
  for (double l : lambdas) {
    SweepRow row;
    scaled.push_back(scaled_measure(f, body, p, kind, l, options, &row));
    row.reference = reference;
    row.rel_error = relative_error(row.value, reference);
    table.rows.push_back(row);
  }
  // Rows are ordered toward the limit; extrapolate linearly in 1/lambda
  // (part a) or lambda (part b) through the last two.
  const std::size_t last = lambdas.size() - 1;
  auto abscissa = [&](double l) { return large ? 1.0 / l : l; };
  const Estimate x = extrapolate_linear(abscissa(lambdas[last - 1]), scaled[last - 1], abscissa(lambdas[last]),
                                        scaled[last], 0.0);
  table.extrapolated = make_row(large ? kInf : 0.0, x.value, x.std_error, reference);
  const double threshold = large ? 0.1 : 0.05;
  table.verdict = table.rows.back().rel_error < threshold ? Verdict::pass : Verdict::fail;
  return table;
}

}  // namespace

SweepTable limit_sweep_large_lambda(const TestFunction& f, const ConvexBody& body, double p,
                                    const std::vector<double>& lambdas, const LevelSetOptions& options) {
  const double reference = 2.0 / f.dimension() * grad_moment_energy(f, body, p, options.mc).value;
  SweepTable t = lambda_sweep(f, body, p, LevelSetKind::part_a, lambdas, options, reference);
  t.reference_source = "large-lambda limit (2/n) int ||grad f||^p_{Z_p^* K}";
  return t;
}

SweepTable limit_sweep_small_lambda(const TestFunction& f, const ConvexBody& body, double p,
                                    const std::vector<double>& lambdas, const LevelSetOptions& options) {
  const double norm = f.kind() == FunctionKind::zero ? 0.0 : f.lp_norm_pow(p);
  const double reference = 2.0 * body.volume().value * norm;
  SweepTable t = lambda_sweep(f, body, p, LevelSetKind::part_b, lambdas, options, reference);
  t.reference_source = "small-lambda limit 2|K| ||f||_p^p";
  return t;
}

bool measures_nonincreasing(const SweepTable& table) {
  std::vector<SweepRow> rows = table.rows;
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.param < b.param; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double slack = 3.0 * std::hypot(rows[i].raw_std_error, rows[i - 1].raw_std_error);
    if (rows[i].raw > rows[i - 1].raw + slack) return false;
  }
  return true;
}

// Quadrature-exact estimates report zero standard error; allow for rounding.
constexpr double kRoundoff = 1e-9;

SandwichReport sandwich_check(const TestFunction& f, const ConvexBody& body, double p, LevelSetKind kind,
                              const std::vector<double>& lambdas, const LevelSetOptions& options) {
  SandwichReport rep;
  rep.kind = kind;
  rep.quasinorm = weak_quasinorm(f, body, p, kind, lambdas, options);
  const Estimate& q = rep.quasinorm.estimate;
  const bool zero = f.kind() == FunctionKind::zero;
  if (kind == LevelSetKind::part_a) {
    const double energy = zero ? 0.0 : grad_moment_energy(f, body, p, options.mc).value;
    rep.lower = 2.0 / f.dimension() * energy;
    rep.upper = std::numeric_limits<double>::quiet_NaN();
    rep.ratio = energy > 0.0 ? q.value / energy : 0.0;
    rep.verdict = rep.lower <= q.value + 3.0 * q.std_error + kRoundoff * rep.lower ? Verdict::pass : Verdict::fail;
  } else {
    const double base = body.volume().value * (zero ? 0.0 : f.lp_norm_pow(p));
    rep.lower = 2.0 * base;
    rep.upper = std::pow(2.0, p + 1.0) * base;
    rep.ratio = rep.lower > 0.0 ? q.value / rep.lower : 0.0;
    const bool ok = rep.lower <= q.value + 3.0 * q.std_error + kRoundoff * rep.lower &&
                    q.value <= rep.upper + 3.0 * q.std_error;
    rep.verdict = ok ? Verdict::pass : Verdict::fail;
  }
  return rep;
}

TruncationReport truncation_consistency(const TestFunction& f, std::shared_ptr<const ConvexBody> body, double p,
                                        double lambda, double r, double split, const LevelSetOptions& options) {
  require(split > 0.0 && split < 1.0, "truncation_consistency: split must lie in (0, 1)");
  TruncationReport rep;
  rep.lambda = lambda;
  rep.r = r;
  rep.split = split;
  const auto [fr, gr] = f.truncate(r, body);
  auto mu = [&](const TestFunction& h, double l) {
    return levelset_measure(LevelSetQuery{&h, body.get(), p, LevelSetKind::part_b, l, options});
  };
  rep.full = mu(f, lambda);
  rep.a_f = mu(fr, lambda * (1.0 - split));
  rep.a_g = mu(gr, lambda * split);
  rep.a_f_bar = mu(fr, lambda * (1.0 + split));
  const double se_up = std::sqrt(rep.full.std_error * rep.full.std_error + rep.a_f.std_error * rep.a_f.std_error +
                                 rep.a_g.std_error * rep.a_g.std_error);
  const double se_lo = std::sqrt(rep.full.std_error * rep.full.std_error +
                                 rep.a_f_bar.std_error * rep.a_f_bar.std_error + rep.a_g.std_error * rep.a_g.std_error);
  rep.upper_holds = rep.full.value <= rep.a_f.value + rep.a_g.value + 3.0 * se_up;
  rep.lower_holds = rep.full.value >= rep.a_f_bar.value - rep.a_g.value - 3.0 * se_lo;
  rep.verdict = rep.upper_holds && rep.lower_holds ? Verdict::pass : Verdict::fail;
  return rep;
}

}  // namespace anisolab
