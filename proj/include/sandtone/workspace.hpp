#pragma once

// On-disk layout shared by the CLI and the HTTP service. Both front ends go
// through these helpers so that the same inputs produce the same bytes.
//
//   <dir>/plan.json
//   <dir>/recipe.csv
//   <dir>/sands/<sand id>.png      normalized copy of each sand photo
//   <dir>/swatch_NN.png + .json

#include "sandtone/converter.hpp"
#include "sandtone/planner.hpp"
#include "sandtone/texture.hpp"

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>

namespace sandtone {

inline constexpr std::size_t kMaxUploadBytes = 32u * 1024u * 1024u;

/// File stem reduced to [A-Za-z0-9_-]; "sand" if nothing survives. A taken id
/// gets "-2", "-3", ... appended.
std::string allocate_sand_id(const std::string& filename, const std::set<std::string>& taken);

/// Relative path of the normalized sand photo inside a plan directory.
std::string sand_relative_path(const std::string& sand_id);

struct ImportedSand {
  SandSample sample;
  bool alpha_discarded = false;
};

/// Decodes an uploaded/read sand photo and assigns it an id from `filename`.
/// Throws TooLarge beyond kMaxUploadBytes.
ImportedSand import_sand(std::span<const std::uint8_t> bytes, const std::string& filename,
                         const std::set<std::string>& taken_ids);

/// Writes the sand's normalized PNG under `dir`.
void store_sand(const std::filesystem::path& dir, const SandSample& sand);

/// Reads plan.json and attaches the sand images referenced by source_file
/// (relative paths resolve against the plan's directory).
MixturePlan load_plan_with_images(const std::filesystem::path& plan_path);

std::string swatch_file_stem(int slot);  // "swatch_07"

/// {slot, seed, expected_gray, measured_mean_gray}
std::string swatch_sidecar_json(const MixtureTexture& texture);

/// Parses "W", "WxH" → params (seed untouched).
SynthesisParams parse_size(const std::string& text, SynthesisParams base = {});

/// Parses "t1,t2,..." into a table; the count must be set_size - 1.
/// Errors: "size mismatch", "threshold collision".
AssignmentTable parse_thresholds(const std::string& text, int set_size);

}  // namespace sandtone
