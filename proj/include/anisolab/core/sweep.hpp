#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anisolab/core/types.hpp"

namespace anisolab {

struct SweepRow {
  double param = 0.0;
  double value = 0.0;      // scaled quantity, e.g. (1-s) * seminorm
  double std_error = 0.0;
  double reference = 0.0;
  double rel_error = 0.0;
  double raw = 0.0;        // unscaled estimate (seminorm or measure)
  double raw_std_error = 0.0;
};

/// |value - reference| / max(reference, 1e-30).
double relative_error(double value, double reference);

SweepRow make_row(double param, double value, double std_error, double reference);

struct SweepTable {
  std::vector<SweepRow> rows;
  Verdict verdict = Verdict::inconclusive;
  /// Linear extrapolation to the limit point through the two rows closest
  /// to it; `param` holds the limit abscissa.
  std::optional<SweepRow> extrapolated;
  std::string reference_source;
};

/// Value at `target` of the line through (x1, y1) and (x2, y2), with the
/// standard error of that linear combination of independent inputs.
Estimate extrapolate_linear(double x1, const Estimate& y1, double x2, const Estimate& y2,
                            double target);

}  // namespace anisolab
