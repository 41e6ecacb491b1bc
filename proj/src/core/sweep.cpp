#include "anisolab/core/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "anisolab/core/error.hpp"

namespace anisolab {

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(reference, 1e-30);
}

SweepRow make_row(double param, double value, double std_error, double reference) {
  SweepRow r;
  r.param = param;
  r.value = value;
  r.std_error = std_error;
  r.reference = reference;
  r.rel_error = relative_error(value, reference);
  return r;
}

Estimate extrapolate_linear(double x1, const Estimate& y1, double x2, const Estimate& y2,
                            double target) {
  require(x1 != x2, "extrapolate_linear: abscissae must differ");
  const double w1 = (x2 - target) / (x2 - x1);
  const double w2 = (target - x1) / (x2 - x1);
  Estimate out;
  out.value = w1 * y1.value + w2 * y2.value;
  out.std_error = std::hypot(w1 * y1.std_error, w2 * y2.std_error);
  out.samples = y1.samples + y2.samples;
  out.seed = y1.seed;
  return out;
}

}  // namespace anisolab
