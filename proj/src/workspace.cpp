#include "sandtone/workspace.hpp"

#include "sandtone/error.hpp"
#include "sandtone/image_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace sandtone {

namespace fs = std::filesystem;

namespace {

int parse_int(std::string_view s, const char* what) {
  int value = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end != s.data() + s.size()) fail(std::string("invalid ") + what + ": '" + std::string(s) + "'");
  return value;
}

}  // namespace

std::string allocate_sand_id(const std::string& filename, const std::set<std::string>& taken) {
  std::string stem = fs::path(filename).stem().string();
  std::string id;
  for (char c : stem) {
    const auto u = static_cast<unsigned char>(c);
    id += (std::isalnum(u) || c == '_' || c == '-') ? c : '_';
  }
  if (id.empty() || id.find_first_not_of('_') == std::string::npos) id = "sand";
  if (!taken.count(id)) return id;
  for (int n = 2;; ++n) {
    std::string candidate = id + "-" + std::to_string(n);
    if (!taken.count(candidate)) return candidate;
  }
}

std::string sand_relative_path(const std::string& sand_id) { return "sands/" + sand_id + ".png"; }

ImportedSand import_sand(std::span<const std::uint8_t> bytes, const std::string& filename,
                         const std::set<std::string>& taken_ids) {
  if (bytes.size() > kMaxUploadBytes) {
    throw Error(ErrorKind::TooLarge, filename + ": image exceeds the 32 MB upload limit");
  }
  DecodedImage decoded;
  try {
    decoded = decode_image(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), filename + ": " + e.what());
  }
  const std::string id = allocate_sand_id(filename, taken_ids);
  const std::string name = fs::path(filename).stem().string();
  return {make_sand(id, name.empty() ? id : name, std::move(decoded.image), sand_relative_path(id)),
          decoded.alpha_discarded};
}

void store_sand(const fs::path& dir, const SandSample& sand) {
  if (!sand.image) throw Error(ErrorKind::NotFound, "no image for sand " + sand.id);
  const fs::path target = dir / sand_relative_path(sand.id);
  fs::create_directories(target.parent_path());
  write_png(target, *sand.image);
}

MixturePlan load_plan_with_images(const fs::path& plan_path) {
  const std::vector<std::uint8_t> raw = read_file(plan_path);
  MixturePlan plan = plan_from_json_text(std::string(raw.begin(), raw.end()));
  const fs::path base = plan_path.parent_path();
  for (SandSample& s : plan.sands) {
    if (s.source_file.empty()) throw Error(ErrorKind::NotFound, "sand " + s.id + " has no source_file");
    fs::path p = s.source_file;
    if (p.is_relative()) p = base / p;
    s.image = std::make_shared<const RgbImage>(load_image(p).image);
  }
  return plan;
}

std::string swatch_file_stem(int slot) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "swatch_%02d", slot);
  return buf;
}

std::string swatch_sidecar_json(const MixtureTexture& texture) {
  nlohmann::ordered_json doc;
  doc["slot"] = texture.mixture_slot;
  doc["seed"] = texture.seed;
  doc["expected_gray"] = texture.source_ratio.expected_gray;
  doc["measured_mean_gray"] = mean_gray_rgb(texture.image).mean;
  return doc.dump(2) + "\n";
}

SynthesisParams parse_size(const std::string& text, SynthesisParams base) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) {
    base.width = base.height = parse_int(text, "size");
  } else {
    base.width = parse_int(std::string_view(text).substr(0, x), "size");
    base.height = parse_int(std::string_view(text).substr(x + 1), "size");
  }
  if (base.width < 2 || base.height < 2) fail("swatch must be at least 2x2");
  return base;
}

AssignmentTable parse_thresholds(const std::string& text, int set_size) {
  std::vector<int> interior;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    interior.push_back(parse_int(rest.substr(0, comma), "threshold"));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (static_cast<int>(interior.size()) != set_size - 1) {
    fail("size mismatch: expected " + std::to_string(set_size - 1) + " thresholds, got " +
         std::to_string(interior.size()));
  }
  return table_from_interior(interior);
}

}  // namespace sandtone
