#include <doctest.h>

#include <cmath>

#include "anisolab/core/error.hpp"
#include "anisolab/estimators/gagliardo.hpp"

using namespace anisolab;
using doctest::Approx;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

const ConvexBody& segment() {
  static const ConvexBody k = ConvexBody::box(v1(1.0));
  return k;
}

SeminormQuadrature monte_carlo(std::size_t samples, std::uint64_t seed = 3, int threads = 1) {
  SeminormQuadrature q;
  q.method = SeminormMethod::monte_carlo;
  q.mc.samples = samples;
  q.mc.seed = seed;
  q.mc.threads = threads;
  return q;
}

}  // namespace

TEST_CASE("indicator of the unit interval has seminorm 4/(s(1-s))") {
  const TestFunction ind = TestFunction::indicator_box(v1(0), v1(1));
  for (double s : {0.25, 0.5, 0.75}) {
    const Estimate e = seminorm({&ind, &segment(), 1.0, s, {}});
    CHECK(e.value == Approx(4.0 / (s * (1 - s))).epsilon(1e-6));
  }
}

TEST_CASE("dilating K by 2 multiplies the seminorm by 2^{n+sp}") {
  const TestFunction pb = TestFunction::poly_bump(v1(0.1), 1.0, 3);
  const ConvexBody k2 = ConvexBody::box(v1(2.0));
  for (double s : {0.3, 0.7}) {
    const double a = seminorm({&pb, &segment(), 2.0, s, {}}).value;
    const double b = seminorm({&pb, &k2, 2.0, s, {}}).value;
    CHECK(b / a == Approx(std::pow(2.0, 1 + 2 * s)).epsilon(1e-8));
  }
}

TEST_CASE("small-s limit recovers 2n|K| ||f||_p^p / p") {
  const TestFunction ind = TestFunction::indicator_box(v1(0), v1(1));
  const SweepTable t = ms_sweep(ind, segment(), 1.0, default_ms_grid());
  REQUIRE(t.extrapolated.has_value());
  CHECK(t.extrapolated->reference == Approx(4.0));
  CHECK(std::abs(t.extrapolated->value - 4.0) <= 0.02 * 4.0);
  CHECK(t.verdict == Verdict::pass);
}

TEST_CASE("s near 1 recovers the moment-body gradient energy") {
  const TestFunction pb = TestFunction::poly_bump(v1(0), 1.0, 3);
  const SweepTable t = bbm_sweep(pb, segment(), 2.0, {0.95, 0.99});
  const SweepRow& last = t.rows.back();
  CHECK(last.param == 0.99);
  CHECK(last.reference == Approx(9216.0 / 3465.0).epsilon(1e-10));
  CHECK(last.rel_error < 0.10);
}

TEST_CASE("divergent configurations raise divergence") {
  const TestFunction ind = TestFunction::indicator_box(v1(0), v1(1));
  for (double s : {0.6, 0.9}) {
    try {
      seminorm({&ind, &segment(), 2.0, s, {}});
      FAIL("no divergence reported");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::divergence);
    }
  }
  CHECK_THROWS_AS(seminorm({&ind, &segment(), 1.0, 1.0, {}}), Error);
  CHECK_THROWS_AS(seminorm({&ind, &segment(), 1.0, 0.0, {}}), Error);
  // Only sp matters for an indicator; sp = 0.8 still converges.
  CHECK(seminorm({&ind, &segment(), 2.0, 0.4, {}}).value == Approx(4.0 / (0.8 * 0.2)).epsilon(1e-5));
}

TEST_CASE("zero function has zero seminorm") {
  const TestFunction z = TestFunction::zero(2);
  const ConvexBody b = ConvexBody::ball(2);
  CHECK(seminorm({&z, &b, 1.5, 0.5, {}}).value == 0.0);
}

TEST_CASE("Monte Carlo agrees with the deterministic rule") {
  const TestFunction pb = TestFunction::poly_bump(v1(0.2), 0.8, 4);
  for (double s : {0.3, 0.8}) {
    const double exact = seminorm({&pb, &segment(), 2.0, s, {}}).value;
    const Estimate mc = seminorm({&pb, &segment(), 2.0, s, monte_carlo(20000)});
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(mc.value - exact) <= 4 * mc.std_error);
  }
}

TEST_CASE("Monte Carlo results do not depend on the thread count") {
  const TestFunction pb = TestFunction::poly_bump(v1(0), 1.0, 3);
  const Estimate a = seminorm({&pb, &segment(), 2.0, 0.5, monte_carlo(4000, 11, 1)});
  const Estimate b = seminorm({&pb, &segment(), 2.0, 0.5, monte_carlo(4000, 11, 4)});
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  const Estimate c = seminorm({&pb, &segment(), 2.0, 0.5, monte_carlo(4000, 12, 1)});
  CHECK(c.value != a.value);
}
