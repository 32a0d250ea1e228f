#pragma once

// Mixture planning: order sands by shade, pin each one to a slot of an
// N-mixture set, and fill the slots between consecutive pinned sands with
// linear parts ratios.

#include "sandtone/image.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace sandtone {

inline constexpr int kDefaultSetSize = 16;
inline constexpr int kPlanFormatVersion = 1;

struct SandSample {
  std::string id;
  std::string name;
  std::shared_ptr<const RgbImage> image;  // may be null for plans loaded from disk
  double mean_gray = 0.0;
  std::string source_file;
  std::map<std::string, std::string> capture_meta;  // ISO, shutter, lux...; informational
};

/// Builds a sample and derives mean_gray from the image.
SandSample make_sand(std::string id, std::string name, RgbImage image,
                     std::string source_file = {});

struct Component {
  std::string sand_id;
  int parts = 0;

  friend bool operator==(const Component&, const Component&) = default;
};

struct MixtureSpec {
  int slot = 0;
  std::vector<Component> components;
  std::vector<double> percentages;  // parallel to components, sums to 100
  double expected_gray = 0.0;

  int total_parts() const;
};

/// Fills percentages and expected_gray from the components' parts and the
/// sands' mean grays. Throws on unknown ids or zero total parts.
MixtureSpec make_mixture(int slot, std::vector<Component> components,
                         const std::vector<SandSample>& sands);

struct MixturePlan {
  int set_size = kDefaultSetSize;
  std::vector<SandSample> sands;      // darkest first
  std::vector<MixtureSpec> mixtures;  // slot order, exactly set_size entries
  std::map<std::string, int> anchor_slots;

  const SandSample* find_sand(const std::string& id) const;
};

/// Ascending by mean gray, stable on ties.
/// Errors: "need at least two sands", "duplicate sand id".
std::vector<SandSample> sort_sands(std::vector<SandSample> samples);

/// Pins each sorted sand to a slot in [1, set_size]. The darkest takes slot 1,
/// the lightest slot N; every other sand takes the slot whose equal-interval
/// target gray is nearest (ties go to the lower slot). A sand landing on an
/// occupied slot moves up to the next free one.
/// Errors: "need at least two sands", "set size too small", "equal mean gray",
/// "cannot separate anchors".
std::map<std::string, int> anchor_sands(const std::vector<SandSample>& sorted, int set_size);

/// The gap - 1 mixtures strictly between two anchors `gap` slots apart, with
/// (darker: gap - t, lighter: t) parts for t = 1 .. gap - 1. Parts are kept
/// unreduced, so the midpoint of a gap of 4 is 2:2. The returned slots are
/// the offsets t; callers shift them by the darker anchor's slot.
/// Errors: "anchors out of order" for gap < 1.
std::vector<MixtureSpec> bridge(const SandSample& darker, const SandSample& lighter, int gap);

MixturePlan build_plan(std::vector<SandSample> samples, int set_size = kDefaultSetSize);

/// Artist-facing text: one line per slot, e.g. "A 3 parts (75.00%), B 1 part (25.00%)".
std::string plan_to_recipe(const MixturePlan& plan);

/// One row per slot: slot,sand,parts,percent,expected_gray. Multi-sand slots
/// join their per-sand fields with ';'.
std::string plan_to_csv(const MixturePlan& plan);

nlohmann::ordered_json plan_to_json(const MixturePlan& plan);
/// Canonical serialized form; byte-identical for identical plans.
std::string plan_to_json_text(const MixturePlan& plan);

/// Rebuilds a plan from its JSON document and re-checks every plan invariant.
/// Sand images are not loaded.
MixturePlan plan_from_json(const nlohmann::json& doc);
MixturePlan plan_from_json_text(const std::string& text);

/// Throws if any MixturePlan / MixtureSpec invariant is violated.
void validate_plan(const MixturePlan& plan);

}  // namespace sandtone
