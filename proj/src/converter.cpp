#include "sandtone/converter.hpp"

#include "sandtone/error.hpp"
#include "sandtone/parallel.hpp"
#include "sandtone/random.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sandtone {

AssignmentTable::AssignmentTable(std::vector<int> thresholds) : thresholds_(std::move(thresholds)) {
  if (thresholds_.size() < 2 || thresholds_.size() > 257) fail("invalid set size");
  if (thresholds_.front() != 0 || thresholds_.back() != 256) fail("table must span 0..255");
  for (std::size_t i = 1; i < thresholds_.size(); ++i)
    if (thresholds_[i] <= thresholds_[i - 1]) fail("threshold collision");
}

int AssignmentTable::lookup(int gray) const {
  if (gray < 0 || gray > 255) fail("gray value out of range");
  auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), gray);
  return static_cast<int>(it - thresholds_.begin());
}

std::pair<int, int> AssignmentTable::range(int slot) const {
  if (slot < 1 || slot > set_size()) fail("slot out of range");
  return {thresholds_[slot - 1], thresholds_[slot] - 1};
}

AssignmentTable default_table(int set_size) {
  if (set_size < 1 || set_size > 256) fail("invalid set size");
  const int base = 256 / set_size;
  const int extra = 256 % set_size;
  std::vector<int> t{0};
  for (int i = 0; i < set_size; ++i) t.push_back(t.back() + base + (i < extra ? 1 : 0));
  return AssignmentTable(std::move(t));
}

AssignmentTable table_from_interior(const std::vector<int>& interior) {
  std::vector<int> t{0};
  t.insert(t.end(), interior.begin(), interior.end());
  t.push_back(256);
  return AssignmentTable(std::move(t));
}

AssignmentTable adjust_table(const AssignmentTable& table, int index, int new_threshold) {
  const auto& t = table.thresholds();
  if (index < 1 || index >= table.set_size()) fail("threshold index out of range");
  if (new_threshold <= t[index - 1] || new_threshold >= t[index + 1]) fail("threshold collision");
  std::vector<int> next = t;
  next[index] = new_threshold;
  return AssignmentTable(std::move(next));
}

SlotMap compute_slot_map(const RgbImage& source, const AssignmentTable& table) {
  SlotMap map{source.width(), source.height(), {}};
  map.slots.reserve(source.size());
  // 256-entry lookup so the per-pixel work is a single index.
  int lut[256];
  for (int g = 0; g < 256; ++g) lut[g] = table.lookup(g);
  for (const Rgb& p : source.pixels()) map.slots.push_back(lut[gray_of(p)]);
  return map;
}

std::pair<int, int> window_offset(std::uint64_t seed, int x, int y, int block_size,
                                  int texture_width, int texture_height) {
  const std::uint64_t h =
      random::hash(seed, random::Stream::WindowOffset, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
  const auto ox = random::below(h, static_cast<std::uint64_t>(texture_width - block_size + 1));
  const auto oy = random::below(random::mix64(h), static_cast<std::uint64_t>(texture_height - block_size + 1));
  return {static_cast<int>(ox), static_cast<int>(oy)};
}

SandRender render(const RenderJob& job) {
  if (job.source.empty()) fail("empty image");
  const int b = job.block_size;
  if (b < kMinBlockSize) fail("block size must be at least 2");
  if (job.table.set_size() != job.plan.set_size ||
      static_cast<int>(job.plan.mixtures.size()) != job.plan.set_size) {
    fail("size mismatch");
  }
  const int tw = job.swatch_params.width;
  const int th = job.swatch_params.height;
  if (b > tw || b > th) fail("block larger than swatch");

  SandRender out;
  out.slot_map = compute_slot_map(job.source, job.table);

  // Texture cache: one synthesis per slot that actually occurs, read-only
  // once built.
  const std::set<int> used(out.slot_map.slots.begin(), out.slot_map.slots.end());
  const SandImages images = sand_images(job.plan);
  std::map<int, RgbImage> cache;
  for (int slot : used) {
    SynthesisParams p = job.swatch_params;
    p.seed = swatch_seed(job.seed, slot);
    cache.emplace(slot, synthesize(job.plan.mixtures[slot - 1], images, p).image);
  }
  std::vector<const RgbImage*> by_slot(static_cast<std::size_t>(job.plan.set_size) + 1, nullptr);
  for (const auto& [slot, tex] : cache) by_slot[slot] = &tex;

  const int sw = job.source.width();
  const int sh = job.source.height();
  out.image = RgbImage(sw * b, sh * b);
  parallel_for(sh, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < sw; ++x) {
        const RgbImage& tex = *by_slot[out.slot_map.at(x, y)];
        const auto [ox, oy] = window_offset(job.seed, x, y, b, tw, th);
        for (int dy = 0; dy < b; ++dy)
          for (int dx = 0; dx < b; ++dx) out.image.at(x * b + dx, y * b + dy) = tex.at(ox + dx, oy + dy);
      }
    }
  });
  return out;
}

RgbImage compose_side_by_side(const RgbImage& source, const RgbImage& rendered) {
  if (source.empty() || rendered.empty()) fail("empty image");
  const int out_h = rendered.height();
  const long long scaled = (2LL * source.width() * out_h + source.height()) / (2LL * source.height());
  const int scaled_w = static_cast<int>(std::max(1LL, scaled));

  RgbImage out(scaled_w + kGutterWidth + rendered.width(), out_h, Rgb{255, 255, 255});
  for (int y = 0; y < out_h; ++y) {
    const int sy = static_cast<int>(static_cast<long long>(y) * source.height() / out_h);
    for (int x = 0; x < scaled_w; ++x) {
      const int sx = static_cast<int>(static_cast<long long>(x) * source.width() / scaled_w);
      out.at(x, y) = source.at(sx, sy);
    }
    for (int x = 0; x < rendered.width(); ++x) out.at(scaled_w + kGutterWidth + x, y) = rendered.at(x, y);
  }
  return out;
}

RgbImage render_side_by_side(const RenderJob& job) {
  return compose_side_by_side(job.source, render(job).image);
}

nlohmann::ordered_json slot_map_to_json(const SlotMap& map, int block_size) {
  nlohmann::ordered_json doc;
  doc["width"] = map.width;
  doc["height"] = map.height;
  doc["block_size"] = block_size;
  doc["slots"] = map.slots;
  return doc;
}

std::string slot_map_to_json_text(const SlotMap& map, int block_size) {
  return slot_map_to_json(map, block_size).dump() + "\n";
}

}  // namespace sandtone
