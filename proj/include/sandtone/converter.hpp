#pragma once

// Sand-based rendering of a source picture: quantize its gray values into
// mixture slots through an assignment table, enlarge every source pixel to a
// b x b block, and fill each block with a window of that slot's texture.

#include "sandtone/image.hpp"
#include "sandtone/planner.hpp"
#include "sandtone/texture.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sandtone {

inline constexpr int kDefaultBlockSize = 8;
inline constexpr int kMinBlockSize = 2;
inline constexpr int kGutterWidth = 8;

/// Partition of gray values 0..255 into contiguous slot ranges.
/// thresholds() is t_0 = 0 < t_1 < ... < t_N = 256; slot i (1-based) covers
/// [t_{i-1}, t_i - 1].
class AssignmentTable {
 public:
  /// Validates the full boundary list (including 0 and 256).
  explicit AssignmentTable(std::vector<int> thresholds);

  int set_size() const noexcept { return static_cast<int>(thresholds_.size()) - 1; }
  const std::vector<int>& thresholds() const noexcept { return thresholds_; }

  int lookup(int gray) const;

  /// First and last gray value covered by `slot`.
  std::pair<int, int> range(int slot) const;

  friend bool operator==(const AssignmentTable&, const AssignmentTable&) = default;

 private:
  std::vector<int> thresholds_;
};

/// Equal-width ranges; when N does not divide 256 the extra values go to the
/// darkest ranges. Errors: "invalid set size" for N outside [1, 256].
AssignmentTable default_table(int set_size);

/// Builds a table from the N - 1 interior thresholds t_1 .. t_{N-1}.
/// Errors: "threshold collision" if they are not strictly increasing in (0, 256).
AssignmentTable table_from_interior(const std::vector<int>& interior);

inline int lookup(const AssignmentTable& table, int gray) { return table.lookup(gray); }

/// Replaces t_index (1 <= index <= N - 1). The input table is never modified.
/// Errors: "threshold index out of range", "threshold collision".
AssignmentTable adjust_table(const AssignmentTable& table, int index, int new_threshold);

struct RenderJob {
  RgbImage source;
  MixturePlan plan;  // sands must carry images
  AssignmentTable table = default_table(kDefaultSetSize);
  int block_size = kDefaultBlockSize;
  std::uint64_t seed = 0;
  SynthesisParams swatch_params;  // seed is overridden by `seed`
};

struct SlotMap {
  int width = 0;
  int height = 0;
  std::vector<int> slots;  // row-major, 1-based slot per source pixel

  int at(int x, int y) const { return slots[static_cast<std::size_t>(y) * width + x]; }
};

struct SandRender {
  RgbImage image;
  SlotMap slot_map;
};

/// Quantizes the source through the table.
SlotMap compute_slot_map(const RgbImage& source, const AssignmentTable& table);

/// Offset of the texture window used for source pixel (x, y).
std::pair<int, int> window_offset(std::uint64_t seed, int x, int y, int block_size,
                                  int texture_width, int texture_height);

/// Errors: "size mismatch", "empty image", "block size must be at least 2",
/// "block larger than swatch".
SandRender render(const RenderJob& job);

/// Source (nearest-neighbor scaled to the render's height) on the left, the
/// render on the right, an 8-pixel white gutter between.
RgbImage render_side_by_side(const RenderJob& job);
RgbImage compose_side_by_side(const RgbImage& source, const RgbImage& rendered);

nlohmann::ordered_json slot_map_to_json(const SlotMap& map, int block_size);
std::string slot_map_to_json_text(const SlotMap& map, int block_size);

}  // namespace sandtone
