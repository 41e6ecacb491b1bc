#include "anisolab/estimators/line_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "anisolab/core/error.hpp"
#include "anisolab/core/quadrature.hpp"
#include "anisolab/core/special.hpp"
#include "anisolab/core/streams.hpp"

namespace anisolab {

Mat orthonormal_complement(const Vec& omega) {
  const int n = static_cast<int>(omega.size());
  require(n >= 1 && std::abs(omega.norm() - 1.0) < 1e-12, "orthonormal_complement: omega must be a unit vector");
  Vec v = omega;
  v[0] += omega[0] < 0.0 ? -1.0 : 1.0;
  const Mat h = Mat::Identity(n, n) - 2.0 * v * v.transpose() / v.squaredNorm();
  return h.rightCols(n - 1);
}

Vec Line::base() const {
  if (dimension() == 1) return Vec::Zero(1);
  return orthonormal_complement(omega) * coords;
}

Vec Line::point(double s) const { return base() + s * omega; }

double Line::param(const Vec& x) const { return x.dot(omega); }

Line Line::through(const Vec& x, const Vec& y) {
  const Vec d = x - y;
  const double len = d.norm();
  require(len > 0.0, "Line::through: points must differ");
  Line l;
  l.omega = d / len;
  l.coords = orthonormal_complement(l.omega).transpose() * x;
  return l;
}

double line_sample_weight(int n, double window_radius) {
  require(n >= 1 && window_radius > 0.0, "line_sample_weight: invalid arguments");
  const double section = n == 1 ? 1.0 : unit_ball_volume(n - 1) * std::pow(window_radius, n - 1);
  return 0.5 * unit_sphere_area(n) * section;
}

LineSample sample_line(int n, double window_radius, Philox& rng) {
  LineSample out;
  out.line.omega = random_direction(n, rng);
  out.line.coords = n > 1 ? Vec(window_radius * random_in_unit_ball(n - 1, rng)) : Vec::Zero(0);
  out.weight = line_sample_weight(n, window_radius);
  return out;
}

namespace {

std::vector<double> cut_points(double lo, double hi, std::vector<double> extra) {
  std::vector<double> pts{lo};
  std::sort(extra.begin(), extra.end());
  for (double b : extra)
    if (b > pts.back() && b < hi) pts.push_back(b);
  pts.push_back(hi);
  return pts;
}

}  // namespace

Estimate bp_integrate(const PairIntegrand& g, int n, double window_radius, const McConfig& mc, double rel_tol) {
  require(static_cast<bool>(g.g), "bp_integrate: integrand required");
  const double weight = line_sample_weight(n, window_radius);
  return mc_mean(mc, streams::lines, [&](Philox& rng, std::size_t count) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < count; ++i) {
      const LineSample ls = sample_line(n, window_radius, rng);
      const double c2 = window_radius * window_radius - ls.line.coords.squaredNorm();
      if (!(c2 > 0.0)) continue;
      const double c = std::sqrt(c2);
      const Vec base = ls.line.base();
      const Vec& w = ls.line.omega;
      const std::vector<double> pts = cut_points(-c, c, g.breakpoints ? g.breakpoints(ls.line) : std::vector<double>{});
      auto inner = [&](double sx) {
        const Vec x = base + sx * w;
        std::vector<double> extra(pts.begin() + 1, pts.end() - 1);
        extra.push_back(sx);
        const std::vector<double> cuts = cut_points(-c, c, extra);
        auto h = [&](double sy) {
          const double d = std::abs(sx - sy);
          return g.g(x, base + sy * w) * (n == 1 ? 1.0 : std::pow(d, n - 1));
        };
        return integrate_piecewise(h, cuts, rel_tol, 10).value;
      };
      sum.add(weight * integrate_piecewise(inner, pts, rel_tol, 10).value);
    }
    return sum.value();
  });
}

double l1_norm(const LineFunction& F) {
  if (!(F.support.hi > F.support.lo)) return 0.0;
  return integrate_adaptive([&](double s) { return std::abs(F.F(s)); }, F.support.lo, F.support.hi, 1e-10).value;
}

namespace {

// Cumulative integral of F on a uniform table, linearly interpolated.
class Cumulative {
 public:
  Cumulative(const LineFunction& F, Interval window, int nodes)
      : lo_(window.lo), h_(window.length() / nodes), values_(nodes + 1, 0.0) {
    CompensatedSum acc;
    for (int k = 0; k < nodes; ++k) {
      const double a = std::max(lo_ + k * h_, F.support.lo);
      const double b = std::min(lo_ + (k + 1) * h_, F.support.hi);
      // One 15-point Kronrod panel per segment: relative-tolerance refinement
      // stalls on roundoff where F is tiny, and segments are already short.
      if (b > a) acc.add(integrate_adaptive(F.F, a, b, 1e-12, 0).value);
      values_[k + 1] = acc.value();
    }
  }

  double operator()(double x) const {
    const double u = (x - lo_) / h_;
    const auto last = static_cast<double>(values_.size() - 1);
    if (u <= 0.0) return values_.front();
    if (u >= last) return values_.back();
    const auto k = static_cast<std::size_t>(u);
    const double frac = u - static_cast<double>(k);
    return values_[k] + frac * (values_[k + 1] - values_[k]);
  }

 private:
  double lo_, h_;
  std::vector<double> values_;
};

}  // namespace

double e_set_measure_1d(const LineFunction& F, double gamma, const ESetOptions& options) {
  require(gamma > 0.0 && std::isfinite(gamma), "e_set_measure_1d: gamma must be positive");
  require(options.resolution >= 8 && options.table_nodes >= options.resolution,
          "e_set_measure_1d: resolution too small");
  if (!(F.support.hi > F.support.lo)) return 0.0;
  Interval window;
  if (options.window) {
    window = *options.window;
  } else {
    const double reach = std::pow(l1_norm(F), 1.0 / (gamma + 1.0));
    // At least one full cell of padding so boundary cells lie off the support.
    const double pad = std::max(1.05 * reach, 2.0 * F.support.length() / (options.resolution - 2));
    window = Interval{F.support.lo - pad, F.support.hi + pad};
  }
  const Cumulative A(F, window, options.table_nodes);
  const int m = options.resolution;
  const double h = window.length() / m;
  std::vector<double> a(m), thr(m), w(m);
  std::vector<char> nonzero(m);
  for (int i = 0; i < m; ++i) {
    const double c = window.lo + (i + 0.5) * h;
    a[i] = A(c);
    const bool inside = c >= F.support.lo && c <= F.support.hi;
    nonzero[i] = inside && F.F(c) != 0.0;
    thr[i] = std::pow(i * h, gamma + 1.0);
  }
  // Exact integral of |x - y|^{gamma-1} over a cell at diagonal offset k:
  // the second difference of u^{gamma+1} / (gamma (gamma + 1)).
  auto G = [&](double u) { return std::pow(u, gamma + 1.0) / (gamma * (gamma + 1.0)); };
  w[0] = 2.0 * G(h);
  for (int k = 1; k < m; ++k) w[k] = G((k + 1) * h) - 2.0 * G(k * h) + G((k - 1) * h);

  CompensatedSum total;
  bool boundary_hit = false;
  for (int i = 0; i < m; ++i) {
    if (nonzero[i]) {
      total.add(w[0]);
      if (i == 0 || i == m - 1) boundary_hit = true;
    }
    double row = 0.0;
    for (int j = i + 1; j < m; ++j) {
      if (std::abs(a[j] - a[i]) >= thr[j - i]) {
        row += 2.0 * w[j - i];
        if (i == 0 || j == m - 1) boundary_hit = true;
      }
    }
    total.add(row);
  }
  if (boundary_hit) fail(ErrorCode::window_too_small, "e_set_measure_1d: the set touches the window boundary");
  return total.value();
}

double prop21_ratio(const LineFunction& F, double gamma, const ESetOptions& options) {
  const double l1 = l1_norm(F);
  require(l1 > 0.0, "prop21_ratio: ||F||_1 must be positive");
  return e_set_measure_1d(F, gamma, options) / (std::pow(5.0, gamma) / gamma * l1);
}

LineField gradient_line_field(const TestFunction& f, const ConvexBody& body, double p, double lambda) {
  require(f.differentiable(), "gradient_line_field: f must be differentiable");
  require(lambda > 0.0 && p >= 1.0, "gradient_line_field: need lambda > 0 and p >= 1");
  const int n = f.dimension();
  return [&f, &body, p, lambda, n](const Line& line) {
    LineFunction out;
    const Vec base = line.base();
    const Vec omega = line.omega;
    const std::optional<Interval> chord = f.sampling_domain().line_chord(base, omega);
    out.support = chord.value_or(Interval{0.0, 0.0});
    const double denom = std::pow(lambda, p) * std::pow(body.gauge(omega), n + p);
    out.F = [&f, base, omega, p, denom](double s) {
      return std::pow(std::abs(f.gradient(base + s * omega).dot(omega)), p) / denom;
    };
    return out;
  };
}

Prop22Report prop22_check(const LineField& field, int n, double window_radius, const McConfig& mc,
                          const ESetOptions& per_line) {
  struct Pair {
    ChunkTotal lhs, rhs;
  };
  const double weight = line_sample_weight(n, window_radius);
  const std::vector<Pair> chunks = run_chunks(mc.chunks, mc.threads, [&](int c) {
    Philox rng(mc.seed, stream_id(streams::line_field, static_cast<std::uint64_t>(c)));
    const std::size_t count = chunk_size(mc.samples, mc.chunks, c);
    CompensatedSum lhs, rhs;
    for (std::size_t i = 0; i < count; ++i) {
      const LineSample ls = sample_line(n, window_radius, rng);
      const LineFunction F = field(ls.line);
      if (!(F.support.hi > F.support.lo)) continue;
      lhs.add(weight * e_set_measure_1d(F, static_cast<double>(n), per_line));
      rhs.add(weight * l1_norm(F));
    }
    return Pair{{lhs.value(), count}, {rhs.value(), count}};
  });
  std::vector<ChunkTotal> l, r;
  for (const Pair& p : chunks) {
    l.push_back(p.lhs);
    r.push_back(p.rhs);
  }
  Prop22Report rep;
  rep.lhs = batch_means(l, mc.seed);
  rep.rhs = batch_means(r, mc.seed);
  rep.envelope = 100.0 * std::pow(5.0, n) / n;
  rep.ratio = rep.rhs.value > 0.0 ? rep.lhs.value / rep.rhs.value : 0.0;
  const bool ok = std::isfinite(rep.ratio) && rep.ratio <= rep.envelope && (rep.rhs.value > 0.0 || rep.lhs.value == 0.0);
  rep.verdict = ok ? Verdict::pass : Verdict::fail;
  return rep;
}

PairIntegrand unit_disk_pairs() {
  PairIntegrand g;
  g.g = [](const Vec& x, const Vec& y) { return x.squaredNorm() <= 1.0 && y.squaredNorm() <= 1.0 ? 1.0 : 0.0; };
  g.breakpoints = [](const Line& line) {
    const double c2 = 1.0 - line.coords.squaredNorm();
    if (!(c2 > 0.0)) return std::vector<double>{};
    const double c = std::sqrt(c2);
    return std::vector<double>{-c, c};
  };
  return g;
}

PairIntegrand unit_square_pairs() {
  PairIntegrand g;
  g.g = [](const Vec& x, const Vec& y) {
    return x.cwiseAbs().maxCoeff() <= 1.0 && y.cwiseAbs().maxCoeff() <= 1.0 ? 1.0 : 0.0;
  };
  g.breakpoints = [](const Line& line) {
    std::vector<double> cuts;
    const Vec base = line.base();
    for (int k = 0; k < 2; ++k)
      if (line.omega[k] != 0.0)
        for (double side : {-1.0, 1.0}) cuts.push_back((side - base[k]) / line.omega[k]);
    return cuts;
  };
  return g;
}

}  // namespace anisolab
