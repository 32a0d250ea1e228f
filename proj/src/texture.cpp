#include "sandtone/texture.hpp"

#include "sandtone/error.hpp"
#include "sandtone/parallel.hpp"
#include "sandtone/random.hpp"

namespace sandtone {

namespace {

struct WeightedSand {
  const RgbImage* image;
  std::uint64_t cumulative_parts;  // exclusive upper bound of this sand's pick range
};

}  // namespace

MixtureTexture synthesize(const MixtureSpec& spec, const SandImages& sands,
                          const SynthesisParams& params) {
  if (params.width < 2 || params.height < 2) fail("swatch must be at least 2x2");

  std::vector<WeightedSand> table;
  std::uint64_t total = 0;
  for (const Component& c : spec.components) {
    auto it = sands.find(c.sand_id);
    if (it == sands.end() || !it->second) throw Error(ErrorKind::NotFound, "unknown sand id " + c.sand_id);
    if (it->second->empty()) fail("empty image for sand " + c.sand_id);
    if (c.parts < 0) fail("negative parts");
    if (c.parts == 0) continue;
    total += static_cast<std::uint64_t>(c.parts);
    table.push_back({it->second.get(), total});
  }
  if (total == 0) fail("empty mixture");

  const int w = params.width;
  const int h = params.height;
  RgbImage out(w, h);
  const std::uint64_t seed = params.seed;

  // Dark squares: weighted sand pick, then a uniform pixel of that sand.
  parallel_for(h, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = y & 1; x < w; x += 2) {
        const auto ux = static_cast<std::uint32_t>(x);
        const auto uy = static_cast<std::uint32_t>(y);
        const std::uint64_t pick = random::below(random::hash(seed, random::Stream::SandPick, ux, uy), total);
        const WeightedSand* sand = &table.front();
        while (pick >= sand->cumulative_parts) ++sand;
        const RgbImage& src = *sand->image;
        const std::uint64_t idx =
            random::below(random::hash(seed, random::Stream::PixelPick, ux, uy), src.size());
        out.at(x, y) = src.pixels()[idx];
      }
    }
  });

  // Light squares: rounded mean of in-bounds orthogonal neighbors, all of
  // which are dark squares and already final.
  parallel_for(h, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = (y & 1) ^ 1; x < w; x += 2) {
        unsigned r = 0, g = 0, b = 0, n = 0;
        auto add = [&](int nx, int ny) {
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
          const Rgb& p = out.at(nx, ny);
          r += p.r;
          g += p.g;
          b += p.b;
          ++n;
        };
        add(x - 1, y);
        add(x + 1, y);
        add(x, y - 1);
        add(x, y + 1);
        // round half up of sum / n
        out.at(x, y) = {static_cast<std::uint8_t>((2 * r + n) / (2 * n)),
                        static_cast<std::uint8_t>((2 * g + n) / (2 * n)),
                        static_cast<std::uint8_t>((2 * b + n) / (2 * n))};
      }
    }
  });

  return {spec.slot, std::move(out), seed, spec};
}

SandImages sand_images(const MixturePlan& plan) {
  SandImages images;
  for (const SandSample& s : plan.sands) {
    if (!s.image) throw Error(ErrorKind::NotFound, "unknown sand id " + s.id + " (no image attached)");
    images.emplace(s.id, s.image);
  }
  return images;
}

std::vector<MixtureTexture> synthesize_plan_swatches(const MixturePlan& plan,
                                                     const SynthesisParams& params) {
  const SandImages images = sand_images(plan);
  std::vector<MixtureTexture> out;
  out.reserve(plan.mixtures.size());
  for (const MixtureSpec& spec : plan.mixtures) {
    SynthesisParams p = params;
    p.seed = swatch_seed(params.seed, spec.slot);
    out.push_back(synthesize(spec, images, p));
  }
  return out;
}

}  // namespace sandtone
