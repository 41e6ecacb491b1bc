#pragma once

#include <array>
#include <cstdint>

#include "anisolab/core/types.hpp"

namespace anisolab {

/// Philox4x32-10 counter-based generator.
///
/// Every stream is addressed by (seed, stream id); the 128-bit counter holds
/// the block index in its low half and the stream id in its high half, so
/// any chunk of any estimator can be regenerated independently of how work
/// was scheduled. Satisfies UniformRandomBitGenerator.
class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::uint64_t block_index_ = 0;
  std::uint64_t stream_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int next_word_ = 4;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Derive a stream id for a named purpose and chunk so different estimators
/// seeded identically still draw disjoint streams.
std::uint64_t stream_id(std::uint64_t purpose, std::uint64_t chunk);

/// Uniform direction on the unit sphere S^{n-1}.
Vec random_direction(int n, Philox& rng);

/// Uniform point in the Euclidean unit ball of R^n.
Vec random_in_unit_ball(int n, Philox& rng);

}  // namespace anisolab
