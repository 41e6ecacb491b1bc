#pragma once

#include <stdexcept>
#include <string>

namespace anisolab {

enum class ErrorCode {
  invalid_argument,
  degenerate_body,
  gradient_unavailable,
  divergence,
  infinite_measure,
  window_too_small,
  zero_directional_derivative,
  support_not_contained,
  config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::invalid_argument, what);
}

}  // namespace anisolab
