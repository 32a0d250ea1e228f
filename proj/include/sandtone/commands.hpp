#pragma once

// Entry points behind the `sandtone` subcommands. Each returns a process exit
// code: 0 on success, 2 when an input file cannot be read or decoded, 1 for
// any other failure. Diagnostics go to `err`.

#include "sandtone/texture.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sandtone::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadInput = 2;

int analyze(const std::vector<std::filesystem::path>& images, std::ostream& out, std::ostream& err);

struct PlanOptions {
  std::vector<std::filesystem::path> images;
  int set_size = 16;
  std::filesystem::path out_dir = ".";
};
int plan(const PlanOptions& opts, std::ostream& out, std::ostream& err);

struct SwatchOptions {
  std::filesystem::path plan_file;
  SynthesisParams params;
  std::filesystem::path out_dir;  // empty: next to the plan file
};
int swatches(const SwatchOptions& opts, std::ostream& out, std::ostream& err);

struct ConvertOptions {
  std::filesystem::path source;
  std::filesystem::path plan_file;
  int block_size = 8;
  std::uint64_t seed = 0;
  std::optional<std::string> thresholds;  // "t1,...,t{N-1}"
  bool side_by_side = false;
  SynthesisParams swatch_params;
  std::filesystem::path out_dir = ".";
};
int convert(const ConvertOptions& opts, std::ostream& out, std::ostream& err);

int serve(const std::string& host, int port, const std::filesystem::path& state_dir,
          std::ostream& out, std::ostream& err);

}  // namespace sandtone::cli
