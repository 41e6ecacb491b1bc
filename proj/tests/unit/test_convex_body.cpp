#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "anisolab/core/error.hpp"
#include "anisolab/core/special.hpp"
#include "anisolab/geometry/convex_body.hpp"

using namespace anisolab;
using doctest::Approx;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::vector<ConvexBody> zoo(int n) {
  std::vector<ConvexBody> out;
  out.push_back(ConvexBody::ball(n, 1.5));
  Mat a = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = 1.0 + i;
  if (n >= 2) a(0, 1) = a(1, 0) = 0.4;
  out.push_back(ConvexBody::ellipsoid(a));
  Vec h(n);
  for (int i = 0; i < n; ++i) h[i] = 0.5 + 0.25 * i;
  out.push_back(ConvexBody::box(h));
  std::vector<Vec> normals;
  for (int i = 0; i < n; ++i) normals.push_back(Vec::Unit(n, i));
  if (n >= 2) normals.push_back(Vec::Ones(n) / n * 1.5);
  out.push_back(ConvexBody::polytope(normals));
  out.push_back(ConvexBody::lq_ball(n, 1.0, 1.0));
  out.push_back(ConvexBody::lq_ball(n, 3.0, 0.8));
  return out;
}

// Chi-square p-value of counts against equal expectation.
double chi_square_p(const std::vector<double>& counts) {
  double total = 0;
  for (double c : counts) total += c;
  const double e = total / counts.size();
  double stat = 0;
  for (double c : counts) stat += (c - e) * (c - e) / e;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("gauge examples") {
  CHECK(ConvexBody::ball(2).gauge(v2(3, 4)) == 5.0);
  CHECK(ConvexBody::box(v2(1, 1)).gauge(v2(0.5, -2)) == 2.0);
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 0.25;
  a(1, 1) = 1.0;
  CHECK(ConvexBody::ellipsoid(a).gauge(v2(1, 1)) == Approx(std::sqrt(5.0) / 2).epsilon(1e-15));
  CHECK_THROWS_AS(ConvexBody::ball(2).gauge(Vec::Zero(3)), Error);
}

TEST_CASE("volume examples") {
  CHECK(ConvexBody::ball(2).volume().value == Approx(std::numbers::pi));
  CHECK(ConvexBody::box(v2(1, 1)).volume().value == 4.0);
  CHECK(ConvexBody::lq_ball(2, 1.0).volume().value == Approx(2.0));
  CHECK(ConvexBody::lq_ball(3, 1.0).volume().value == Approx(8.0 / 6.0));
  CHECK(ConvexBody::lq_ball(3, 2.0, 2.0).volume().value == Approx(4 * std::numbers::pi / 3 * 8));
  // Square as a polytope: exact 4 through rejection from its own bounding box.
  const ConvexBody sq = ConvexBody::polytope({v2(1, 0), v2(0, 1)});
  CHECK(sq.volume().value == 4.0);
  // Cross-polytope |x|+|y| <= 1 written as |x+y| <= 1, |x-y| <= 1: area 2.
  const ConvexBody cross = ConvexBody::polytope({v2(1, 1), v2(1, -1)});
  CHECK(std::abs(cross.volume().value - 2.0) < 4 * cross.volume().std_error + 1e-12);
  CHECK(cross.circumradius() == Approx(1.0));
}

TEST_CASE("invalid bodies") {
  CHECK_THROWS_AS(ConvexBody::ball(2, -1), Error);
  CHECK_THROWS_AS(ConvexBody::box(v2(1, 0)), Error);
  Mat bad = Mat::Identity(2, 2);
  bad(1, 1) = -1;
  CHECK_THROWS_AS(ConvexBody::ellipsoid(bad), Error);
  try {
    ConvexBody::polytope({v2(1, 0)});
    FAIL("unbounded polytope accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_body);
  }
  CHECK_THROWS_AS(ConvexBody::lq_ball(2, 0.5), Error);
}

TEST_CASE("gauge invariants on random points") {
  Philox rng(5, 5);
  for (int n : {1, 2, 3, 4}) {
    for (const ConvexBody& k : zoo(n)) {
      CHECK(k.gauge(Vec::Zero(n)) == 0.0);
      for (int i = 0; i < 300; ++i) {
        Vec x(n), y(n);
        for (int d = 0; d < n; ++d) {
          x[d] = rng.normal();
          y[d] = rng.normal();
        }
        const double t = 4 * rng.uniform() - 2;
        const double gx = k.gauge(x);
        CHECK(gx > 0.0);
        CHECK(k.gauge(-x) == Approx(gx).epsilon(1e-14));
        CHECK(k.gauge(t * x) == Approx(std::abs(t) * gx).epsilon(1e-12));
        CHECK(k.gauge(x + y) <= gx + k.gauge(y) + 1e-12);
      }
    }
  }
}

TEST_CASE("batched gauge matches pointwise gauge") {
  Philox rng(8, 1);
  for (int n : {1, 2, 3, 5}) {
    for (const ConvexBody& k : zoo(n)) {
      const std::size_t count = 37;
      std::vector<double> soa(n * count), out(count);
      for (double& v : soa) v = rng.normal();
      k.gauge_batch({soa.data(), count, count, n}, out.data());
      for (std::size_t i = 0; i < count; ++i) {
        Vec x(n);
        for (int d = 0; d < n; ++d) x[d] = soa[d * count + i];
        CHECK(out[i] == Approx(k.gauge(x)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("samplers land in K and bounding data is consistent") {
  Philox rng(9, 9);
  for (int n : {1, 2, 3}) {
    for (const ConvexBody& k : zoo(n)) {
      for (int i = 0; i < 2000; ++i) {
        const Vec x = k.sample_uniform(rng);
        CHECK(k.gauge(x) <= 1.0);
        CHECK((x.cwiseAbs().array() <= k.bounding_half_widths().array() * (1 + 1e-12)).all());
        CHECK(x.norm() <= k.circumradius() * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("ball sampler mean and box second moment") {
  Philox rng(10, 0);
  const int N = 100000;
  const ConvexBody ball = ConvexBody::ball(3);
  Vec mean = Vec::Zero(3);
  for (int i = 0; i < N; ++i) mean += ball.sample_uniform(rng);
  mean /= N;
  // Coordinate variance on B^3 is 1/5.
  const double se = std::sqrt(0.2 / N);
  for (int d = 0; d < 3; ++d) CHECK(std::abs(mean[d]) < 3 * se);

  const ConvexBody box = ConvexBody::box(v2(1, 1));
  double m2 = 0;
  for (int i = 0; i < N; ++i) {
    const double x = box.sample_uniform(rng)[0];
    m2 += x * x;
  }
  m2 /= N;
  // Var(x^2) for uniform on [-1,1] is 1/5 - 1/9.
  CHECK(std::abs(m2 - 1.0 / 3.0) < 3 * std::sqrt((0.2 - 1.0 / 9) / N));
}

TEST_CASE("sampler uniformity chi-square over 8 cells") {
  const int N = 100000;
  for (const ConvexBody& k : zoo(2)) {
    Philox rng(12, 3);
    // Cells: 4 quadrants x {inner, outer} split at gauge 2^{-1/2} (equal areas).
    std::vector<double> counts(8, 0.0);
    for (int i = 0; i < N; ++i) {
      const Vec x = k.sample_uniform(rng);
      const int quadrant = (x[0] >= 0 ? 1 : 0) + (x[1] >= 0 ? 2 : 0);
      const int shell = k.gauge(x) <= std::sqrt(0.5) ? 0 : 1;
      counts[quadrant * 2 + shell] += 1;
    }
    if (k.shape() == Shape::ellipsoid) {
      // Quadrants of a sheared ellipse are not equal-area; use shells x half-planes.
      counts.assign(8, 0.0);
      Philox again(12, 3);
      for (int i = 0; i < N; ++i) {
        const Vec x = k.sample_uniform(again);
        const double g2 = k.gauge(x) * k.gauge(x);
        const int shell = std::min(3, static_cast<int>(g2 * 4));
        counts[shell * 2 + (x[0] >= 0 ? 1 : 0)] += 1;
      }
    }
    if (k.shape() == Shape::polytope) {
      // Polytope is not symmetric under each quadrant swap either; use half-planes.
      counts.assign(8, 0.0);
      Philox again(12, 3);
      for (int i = 0; i < N; ++i) {
        const Vec x = k.sample_uniform(again);
        const double g2 = k.gauge(x) * k.gauge(x);
        const int shell = std::min(3, static_cast<int>(g2 * 4));
        counts[shell * 2 + (x[0] + x[1] >= 0 ? 1 : 0)] += 1;
      }
    }
    INFO(k.describe());
    CHECK(chi_square_p(counts) > 0.001);
  }
}

TEST_CASE("polytope acceptance for the square is one") {
  const ConvexBody sq = ConvexBody::polytope({v2(1, 0), v2(0, 1)});
  CHECK(sq.bounding_half_widths()[0] == Approx(1.0));
  CHECK(sq.bounding_half_widths()[1] == Approx(1.0));
  CHECK(sq.volume().value / 4.0 == 1.0);
}

TEST_CASE("chords") {
  Philox rng(13, 0);
  for (int n : {1, 2, 3}) {
    for (const ConvexBody& k : zoo(n)) {
      for (int i = 0; i < 50; ++i) {
        Vec p(n), d(n);
        for (int j = 0; j < n; ++j) {
          p[j] = 0.3 * rng.normal();
          d[j] = rng.normal();
        }
        const double r = 0.5 + rng.uniform();
        const auto c = k.chord(p, d, r);
        if (!c) {
          CHECK(k.gauge(p) > r);
          continue;
        }
        CHECK(k.gauge(p + c->lo * d) == Approx(r).epsilon(1e-9));
        CHECK(k.gauge(p + c->hi * d) == Approx(r).epsilon(1e-9));
        CHECK(k.gauge(p + 0.5 * (c->lo + c->hi) * d) <= r);
      }
    }
  }
}

TEST_CASE("moment norm closed forms") {
  const ConvexBody seg = ConvexBody::box(Vec::Constant(1, 1.0));
  MomentNormSpec spec{&seg, 2.0};
  CHECK(moment_norm_p(spec, Vec::Constant(1, 1.0)).value == Approx(1.0));
  const ConvexBody sq = ConvexBody::box(v2(1, 1));
  spec = {&sq, 2.0};
  CHECK(moment_norm_p(spec, v2(1, 0)).value == Approx(8.0 / 3.0).epsilon(1e-14));
  const ConvexBody disk = ConvexBody::ball(2);
  for (double p : {1.0, 2.0, 3.5}) {
    spec = {&disk, p};
    CHECK(moment_norm_p(spec, v2(0.6, 0.8)).value == Approx(k_constant(p, 2) / 2).epsilon(1e-14));
  }
  spec = {&disk, 0.5};
  CHECK_THROWS_AS(moment_norm_p(spec, v2(1, 0)), Error);
}

TEST_CASE("moment norm Monte Carlo agrees with closed forms") {
  Mat a = Mat::Identity(2, 2);
  a(0, 0) = 0.5;
  a(0, 1) = a(1, 0) = 0.2;
  const std::vector<ConvexBody> bodies = {ConvexBody::ball(2), ConvexBody::ball(3, 0.7), ConvexBody::ellipsoid(a),
                                          ConvexBody::box(v2(1.0, 0.5)), ConvexBody::lq_ball(2, 2.0, 1.3)};
  Philox rng(14, 0);
  for (const ConvexBody& k : bodies) {
    const int n = k.dimension();
    for (double p : {1.0, 2.0, 2.5}) {
      if (!has_closed_form_moment(k, p)) continue;
      Vec z(n);
      for (int j = 0; j < n; ++j) z[j] = rng.normal();
      MomentNormSpec closed{&k, p, MomentEstimator::closed_form};
      MomentNormSpec mc{&k, p, MomentEstimator::monte_carlo, McConfig{200000, 3, 32, 1}};
      const double exact = moment_norm_p(closed, z).value;
      const Estimate est = moment_norm_p(mc, z);
      INFO(k.describe() << " p=" << p);
      CHECK(std::abs(est.value - exact) < 3.5 * est.std_error);
    }
  }
}

TEST_CASE("moment norm homogeneity") {
  const ConvexBody cross = ConvexBody::polytope({v2(1, 1), v2(1, -1), v2(1.2, 0)});
  MomentNormSpec spec{&cross, 1.7, MomentEstimator::automatic, McConfig{20000, 1, 32, 1}};
  const Vec z = v2(0.3, -1.1);
  const Estimate base = moment_norm_p(spec, z);
  const double t = -2.5;
  const Estimate scaled = moment_norm_p(spec, t * z);
  CHECK(scaled.value == Approx(std::pow(std::abs(t), 1.7) * base.value).epsilon(1e-12));
}

TEST_CASE("surface integral identity for k(p, n)") {
  for (int n = 2; n <= 4; ++n) {
    for (double p : {1.0, 2.0, 3.0}) {
      McConfig mc{200000, 21, 32, 1};
      const Estimate e = mc_mean(mc, 99, [&](Philox& rng, std::size_t count) {
        double s = 0;
        for (std::size_t i = 0; i < count; ++i) s += std::pow(std::abs(random_direction(n, rng)[0]), p);
        return s;
      });
      const double area = unit_sphere_area(n);
      CHECK(std::abs(area * e.value - k_constant(p, n)) < 3.5 * area * e.std_error);
    }
  }
}

TEST_CASE("body absolute moments") {
  const ConvexBody disk = ConvexBody::ball(2, 2.0);
  // \int_{2B^2} |y|^2 = 2 pi 2^4 / 4.
  CHECK(body_abs_moment(disk, 2.0, {}).value == Approx(8 * std::numbers::pi));
  const ConvexBody sq = ConvexBody::box(v2(1, 1));
  const Estimate e = body_abs_moment(sq, 2.0, McConfig{200000, 4, 32, 1});
  CHECK(std::abs(e.value - 8.0 / 3.0) < 3.5 * e.std_error);
}

TEST_CASE("inradius bounds the gauge on the sphere") {
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = 0.25;
  a(1, 1) = 1.0;
  CHECK(ConvexBody::ball(3, 2.0).inradius() == 2.0);
  CHECK(ConvexBody::box(v2(1, 3)).inradius() == 1.0);
  CHECK(ConvexBody::ellipsoid(a).inradius() == Approx(1.0));
  CHECK(ConvexBody::lq_ball(2, 1.0).inradius() == Approx(std::sqrt(0.5)));
  CHECK(ConvexBody::polytope({v2(1, 1), v2(1, -1)}).inradius() == Approx(std::sqrt(0.5)));

  Philox rng(9, 9);
  for (const ConvexBody& k : {ConvexBody::box(v2(1, 3)), ConvexBody::ellipsoid(a), ConvexBody::lq_ball(2, 1.0),
                              ConvexBody::lq_ball(2, 4.0), ConvexBody::polytope({v2(1, 1), v2(1, -1), v2(0, 2)})}) {
    for (int i = 0; i < 2000; ++i)
      CHECK(k.gauge(random_direction(2, rng)) <= 1.0 / k.inradius() * (1 + 1e-12));
  }
}
