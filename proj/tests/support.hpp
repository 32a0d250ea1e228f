#pragma once

// Shared fixtures for the unit and acceptance suites.

#include "sandtone/image.hpp"
#include "sandtone/planner.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sandtone::testing {

inline RgbImage constant_image(int w, int h, std::uint8_t v) { return RgbImage(w, h, Rgb{v, v, v}); }

/// Noisy "sand photo" whose gray values scatter around `center` by +-spread,
/// with per-channel tint. Deterministic in `seed`.
inline RgbImage noisy_sand(int w, int h, int center, int spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-spread, spread);
  std::uniform_int_distribution<int> tint(-3, 3);
  RgbImage img(w, h);
  for (Rgb& p : img.pixels()) {
    const int base = center + d(rng);
    auto ch = [&](int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); };
    p = {ch(base + tint(rng)), ch(base + tint(rng)), ch(base + tint(rng))};
  }
  return img;
}

inline RgbImage random_image(std::mt19937_64& rng, int max_side = 16) {
  std::uniform_int_distribution<int> side(1, max_side);
  std::uniform_int_distribution<int> ch(0, 255);
  RgbImage img(side(rng), side(rng));
  for (Rgb& p : img.pixels())
    p = {static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng)), static_cast<std::uint8_t>(ch(rng))};
  return img;
}

/// Constant 8x8 sand of the given gray.
inline SandSample constant_sand(const std::string& id, std::uint8_t gray) {
  return make_sand(id, id, constant_image(8, 8, gray));
}

/// Sand with an exact prescribed mean (image carries the mean as a constant).
inline SandSample sand_with_mean(const std::string& id, double mean) {
  SandSample s;
  s.id = id;
  s.name = id;
  s.mean_gray = mean;
  return s;
}

}  // namespace sandtone::testing
