#include "anisolab/core/error.hpp"
#include "anisolab/core/types.hpp"

namespace anisolab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::degenerate_body: return "degenerate-body";
    case ErrorCode::gradient_unavailable: return "gradient-unavailable";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::infinite_measure: return "infinite-measure";
    case ErrorCode::window_too_small: return "window-too-small";
    case ErrorCode::zero_directional_derivative: return "zero-directional-derivative";
    case ErrorCode::support_not_contained: return "support-not-contained";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

}  // namespace anisolab
