#pragma once

#include <cstdint>

// Purpose tags mixed into Philox stream ids so that estimators sharing a
// seed never draw from the same stream.
namespace anisolab::streams {

inline constexpr std::uint64_t body_volume = 0x10;
inline constexpr std::uint64_t body_sampler = 0x11;
inline constexpr std::uint64_t moment_norm = 0x12;
inline constexpr std::uint64_t polytope_setup = 0x13;
inline constexpr std::uint64_t function_norm = 0x20;
inline constexpr std::uint64_t grad_energy = 0x21;
inline constexpr std::uint64_t seminorm = 0x30;
inline constexpr std::uint64_t level_set = 0x40;
inline constexpr std::uint64_t lines = 0x50;
inline constexpr std::uint64_t line_field = 0x51;
inline constexpr std::uint64_t claim1 = 0x60;
inline constexpr std::uint64_t claim2 = 0x61;
inline constexpr std::uint64_t holder = 0x62;

}  // namespace anisolab::streams
