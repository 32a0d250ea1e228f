#pragma once

// Simulated appearance of a mixed sand batch.
//
// The canvas is split like a chessboard. Dark squares ((x + y) even) each
// draw a sand with probability proportional to its parts and copy the color
// of a random pixel of that sand's photo. Light squares then take the
// rounded per-channel average of their orthogonal (dark-square) neighbors.

#include "sandtone/image.hpp"
#include "sandtone/planner.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace sandtone {

inline constexpr int kDefaultSwatchSize = 256;

struct SynthesisParams {
  int width = kDefaultSwatchSize;
  int height = kDefaultSwatchSize;
  std::uint64_t seed = 0;
};

struct MixtureTexture {
  int mixture_slot = 0;
  RgbImage image;
  std::uint64_t seed = 0;
  MixtureSpec source_ratio;
};

using SandImages = std::map<std::string, std::shared_ptr<const RgbImage>>;

/// Errors: "unknown sand id", "empty mixture", "swatch must be at least 2x2".
MixtureTexture synthesize(const MixtureSpec& spec, const SandImages& sands,
                          const SynthesisParams& params);

/// Sand images keyed by id, taken from the plan's samples. Throws
/// "unknown sand id" if a sample has no image attached.
SandImages sand_images(const MixturePlan& plan);

/// Seed for the swatch of `slot`: params.seed XOR slot.
constexpr std::uint64_t swatch_seed(std::uint64_t seed, int slot) noexcept {
  return seed ^ static_cast<std::uint64_t>(slot);
}

/// One texture per slot, in slot order.
std::vector<MixtureTexture> synthesize_plan_swatches(const MixturePlan& plan,
                                                     const SynthesisParams& params);

}  // namespace sandtone
