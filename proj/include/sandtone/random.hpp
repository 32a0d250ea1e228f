#pragma once

// Counter-based pseudorandom values: every draw is a pure function of
// (seed, stream, x, y), so per-pixel work can run in any order or on any
// number of threads and still produce the same image.

#include <cstdint>

namespace sandtone::random {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class Stream : std::uint64_t {
  SandPick = 1,
  PixelPick = 2,
  WindowOffset = 3,
};

constexpr std::uint64_t hash(std::uint64_t seed, Stream stream, std::uint32_t x,
                             std::uint32_t y) noexcept {
  std::uint64_t h = mix64(seed ^ (static_cast<std::uint64_t>(stream) << 56));
  h = mix64(h ^ ((static_cast<std::uint64_t>(x) << 32) | y));
  return h;
}

/// Maps a 64-bit hash onto [0, n) by multiply-high. Bias is below n / 2^64.
constexpr std::uint64_t below(std::uint64_t h, std::uint64_t n) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * n) >> 64);
}

}  // namespace sandtone::random
