#include "sandtone/planner.hpp"

#include "sandtone/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace sandtone {

namespace {

constexpr double kPercentTolerance = 1e-9;

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <typename MeanOf>
void fill_ratio(MixtureSpec& spec, MeanOf&& mean_of) {
  if (spec.components.empty()) fail("empty mixture");
  long long total = 0;
  for (const Component& c : spec.components) {
    if (c.parts < 0) fail("negative parts");
    total += c.parts;
  }
  if (total <= 0) fail("empty mixture");

  spec.percentages.clear();
  spec.expected_gray = 0.0;
  for (const Component& c : spec.components) {
    const double pct = 100.0 * c.parts / static_cast<double>(total);
    spec.percentages.push_back(pct);
    spec.expected_gray += pct / 100.0 * mean_of(c.sand_id);
  }
}

}  // namespace

SandSample make_sand(std::string id, std::string name, RgbImage image, std::string source_file) {
  SandSample s;
  s.id = std::move(id);
  s.name = std::move(name);
  s.mean_gray = mean_gray_rgb(image).mean;
  s.image = std::make_shared<const RgbImage>(std::move(image));
  s.source_file = std::move(source_file);
  return s;
}

int MixtureSpec::total_parts() const {
  int total = 0;
  for (const Component& c : components) total += c.parts;
  return total;
}

MixtureSpec make_mixture(int slot, std::vector<Component> components,
                         const std::vector<SandSample>& sands) {
  MixtureSpec spec;
  spec.slot = slot;
  spec.components = std::move(components);
  fill_ratio(spec, [&](const std::string& id) {
    for (const SandSample& s : sands)
      if (s.id == id) return s.mean_gray;
    throw Error(ErrorKind::NotFound, "unknown sand id " + id);
  });
  return spec;
}

const SandSample* MixturePlan::find_sand(const std::string& id) const {
  for (const SandSample& s : sands)
    if (s.id == id) return &s;
  return nullptr;
}

std::vector<SandSample> sort_sands(std::vector<SandSample> samples) {
  if (samples.size() < 2) fail("need at least two sands");
  std::set<std::string> ids;
  for (const SandSample& s : samples)
    if (!ids.insert(s.id).second) fail("duplicate sand id " + s.id);
  std::stable_sort(samples.begin(), samples.end(),
                   [](const SandSample& a, const SandSample& b) { return a.mean_gray < b.mean_gray; });
  return samples;
}

std::map<std::string, int> anchor_sands(const std::vector<SandSample>& sorted, int set_size) {
  const int count = static_cast<int>(sorted.size());
  if (count < 2) fail("need at least two sands");
  if (set_size < 2) fail("invalid set size");
  if (count > set_size) fail("set size too small");
  for (int i = 1; i < count; ++i) {
    if (sorted[i].mean_gray == sorted[i - 1].mean_gray) {
      fail("equal mean gray: " + sorted[i - 1].id + " and " + sorted[i].id);
    }
    if (sorted[i].mean_gray < sorted[i - 1].mean_gray) fail("sands not sorted darkest first");
  }

  const double dark = sorted.front().mean_gray;
  const double span = sorted.back().mean_gray - dark;
  const int intervals = set_size - 1;

  std::map<std::string, int> slots;
  slots[sorted.front().id] = 1;
  int previous = 1;
  for (int i = 1; i + 1 < count; ++i) {
    // Target of 0-based slot k is dark + k * span / intervals. Work in units
    // of span / intervals scaled by `intervals` to keep the tie test exact
    // for integral means.
    const double pos = (sorted[i].mean_gray - dark) * intervals;
    int k = static_cast<int>(std::floor(pos / span));
    k = std::clamp(k, 0, intervals);
    if (k < intervals) {
      const double below = pos - k * span;
      const double above = (k + 1) * span - pos;
      if (above < below) ++k;
    }
    int slot = std::max(k + 1, previous + 1);
    if (slot >= set_size) fail("cannot separate anchors: " + sorted[i].id);
    slots[sorted[i].id] = slot;
    previous = slot;
  }
  slots[sorted.back().id] = set_size;
  return slots;
}

std::vector<MixtureSpec> bridge(const SandSample& darker, const SandSample& lighter, int gap) {
  if (gap < 1) fail("anchors out of order");
  std::vector<MixtureSpec> out;
  out.reserve(static_cast<std::size_t>(gap - 1));
  for (int t = 1; t < gap; ++t) {
    MixtureSpec spec;
    spec.slot = t;
    spec.components = {{darker.id, gap - t}, {lighter.id, t}};
    fill_ratio(spec, [&](const std::string& id) {
      return id == darker.id ? darker.mean_gray : lighter.mean_gray;
    });
    out.push_back(std::move(spec));
  }
  return out;
}

MixturePlan build_plan(std::vector<SandSample> samples, int set_size) {
  MixturePlan plan;
  plan.set_size = set_size;
  plan.sands = sort_sands(std::move(samples));
  plan.anchor_slots = anchor_sands(plan.sands, set_size);

  for (std::size_t i = 0; i < plan.sands.size(); ++i) {
    const SandSample& sand = plan.sands[i];
    const int slot = plan.anchor_slots.at(sand.id);
    plan.mixtures.push_back(make_mixture(slot, {{sand.id, 1}}, plan.sands));
    if (i + 1 == plan.sands.size()) break;

    const SandSample& next = plan.sands[i + 1];
    for (MixtureSpec& spec : bridge(sand, next, plan.anchor_slots.at(next.id) - slot)) {
      spec.slot += slot;
      plan.mixtures.push_back(std::move(spec));
    }
  }
  validate_plan(plan);
  return plan;
}

void validate_plan(const MixturePlan& plan) {
  const int n = plan.set_size;
  if (n < 2) fail("invalid set size");
  if (plan.sands.size() < 2) fail("need at least two sands");
  if (static_cast<int>(plan.mixtures.size()) != n) fail("plan must have exactly set_size mixtures");

  std::map<std::string, std::size_t> order;
  for (std::size_t i = 0; i < plan.sands.size(); ++i) {
    if (!order.emplace(plan.sands[i].id, i).second) fail("duplicate sand id " + plan.sands[i].id);
    if (i > 0 && !(plan.sands[i].mean_gray > plan.sands[i - 1].mean_gray))
      fail("sands must be strictly increasing in mean gray");
  }

  std::map<std::string, int> pure_slots;
  for (int s = 0; s < n; ++s) {
    const MixtureSpec& m = plan.mixtures[s];
    if (m.slot != s + 1) fail("mixtures out of slot order");
    if (m.components.empty() || m.components.size() != m.percentages.size())
      fail("malformed mixture at slot " + std::to_string(m.slot));

    std::set<std::size_t> used;
    double pct_sum = 0.0;
    double expected = 0.0;
    int total = 0;
    for (const Component& c : m.components) {
      if (c.parts < 0) fail("negative parts");
      total += c.parts;
    }
    if (total <= 0) fail("empty mixture at slot " + std::to_string(m.slot));
    for (std::size_t i = 0; i < m.components.size(); ++i) {
      const Component& c = m.components[i];
      auto it = order.find(c.sand_id);
      if (it == order.end()) fail("unknown sand id " + c.sand_id);
      if (c.parts > 0) used.insert(it->second);
      const double want = 100.0 * c.parts / total;
      if (std::abs(m.percentages[i] - want) > kPercentTolerance)
        fail("percentages disagree with parts at slot " + std::to_string(m.slot));
      pct_sum += m.percentages[i];
      expected += m.percentages[i] / 100.0 * plan.sands[it->second].mean_gray;
    }
    if (std::abs(pct_sum - 100.0) > kPercentTolerance) fail("percentages do not sum to 100");
    if (std::abs(expected - m.expected_gray) > 1e-9) fail("expected gray mismatch at slot " + std::to_string(m.slot));
    if (used.size() > 2) fail("mixture mixes more than two sands");
    if (used.size() == 2 && *used.rbegin() - *used.begin() != 1) fail("mixture mixes non-adjacent sands");
    if (used.size() == 1) {
      const std::string& id = plan.sands[*used.begin()].id;
      if (!pure_slots.emplace(id, m.slot).second) fail("sand " + id + " is pure at more than one slot");
    }
    if (s > 0 && !(m.expected_gray > plan.mixtures[s - 1].expected_gray))
      fail("expected gray not strictly increasing at slot " + std::to_string(m.slot));
  }

  if (pure_slots.size() != plan.sands.size()) fail("every sand must appear pure exactly once");
  if (pure_slots.at(plan.sands.front().id) != 1) fail("slot 1 must be the darkest sand");
  if (pure_slots.at(plan.sands.back().id) != n) fail("last slot must be the lightest sand");
  if (!plan.anchor_slots.empty() && plan.anchor_slots != pure_slots) fail("anchor slots disagree with mixtures");
}

std::string plan_to_recipe(const MixturePlan& plan) {
  std::ostringstream out;
  out << "Mixture set: " << plan.set_size << " slots, " << plan.sands.size() << " sands\n";
  for (const MixtureSpec& m : plan.mixtures) {
    std::string line;
    for (std::size_t i = 0; i < m.components.size(); ++i) {
      const Component& c = m.components[i];
      const SandSample* sand = plan.find_sand(c.sand_id);
      if (i > 0) line += ", ";
      line += (sand ? sand->name : c.sand_id) + " " + std::to_string(c.parts) +
              (c.parts == 1 ? " part" : " parts") + " (" + format_fixed(m.percentages[i], 2) + "%)";
    }
    char slot[8];
    std::snprintf(slot, sizeof slot, "%2d", m.slot);
    out << slot << ": " << line << "  [expected gray " << format_fixed(m.expected_gray, 1) << "]\n";
  }
  return out.str();
}

std::string plan_to_csv(const MixturePlan& plan) {
  std::ostringstream out;
  out << "slot,sand,parts,percent,expected_gray\n";
  for (const MixtureSpec& m : plan.mixtures) {
    std::string names;
    std::string parts;
    std::string pcts;
    for (std::size_t i = 0; i < m.components.size(); ++i) {
      const Component& c = m.components[i];
      const SandSample* sand = plan.find_sand(c.sand_id);
      const char* sep = i > 0 ? ";" : "";
      names += sep + (sand ? sand->name : c.sand_id);
      parts += sep + std::to_string(c.parts);
      pcts += sep + format_fixed(m.percentages[i], 2);
    }
    out << m.slot << ',' << csv_field(names) << ',' << parts << ',' << pcts << ','
        << format_fixed(m.expected_gray, 1) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json plan_to_json(const MixturePlan& plan) {
  nlohmann::ordered_json doc;
  doc["version"] = kPlanFormatVersion;
  doc["set_size"] = plan.set_size;
  doc["sands"] = nlohmann::ordered_json::array();
  for (const SandSample& s : plan.sands) {
    doc["sands"].push_back({{"id", s.id},
                            {"name", s.name},
                            {"mean_gray", s.mean_gray},
                            {"source_file", s.source_file}});
  }
  doc["mixtures"] = nlohmann::ordered_json::array();
  for (const MixtureSpec& m : plan.mixtures) {
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const Component& c : m.components) comps.push_back({{"sand_id", c.sand_id}, {"parts", c.parts}});
    doc["mixtures"].push_back({{"slot", m.slot},
                               {"components", std::move(comps)},
                               {"percentages", m.percentages},
                               {"expected_gray", m.expected_gray}});
  }
  return doc;
}

std::string plan_to_json_text(const MixturePlan& plan) { return plan_to_json(plan).dump(2) + "\n"; }

MixturePlan plan_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("version").get<int>() != kPlanFormatVersion) fail("unsupported plan version");
    MixturePlan plan;
    plan.set_size = doc.at("set_size").get<int>();
    for (const auto& s : doc.at("sands")) {
      SandSample sand;
      sand.id = s.at("id").get<std::string>();
      sand.name = s.at("name").get<std::string>();
      sand.mean_gray = s.at("mean_gray").get<double>();
      sand.source_file = s.value("source_file", std::string{});
      plan.sands.push_back(std::move(sand));
    }
    for (const auto& m : doc.at("mixtures")) {
      MixtureSpec spec;
      spec.slot = m.at("slot").get<int>();
      for (const auto& c : m.at("components"))
        spec.components.push_back({c.at("sand_id").get<std::string>(), c.at("parts").get<int>()});
      spec.percentages = m.at("percentages").get<std::vector<double>>();
      spec.expected_gray = m.at("expected_gray").get<double>();
      plan.mixtures.push_back(std::move(spec));
    }
    validate_plan(plan);
    for (const MixtureSpec& m : plan.mixtures) {
      auto positive = [](const Component& c) { return c.parts > 0; };
      if (std::count_if(m.components.begin(), m.components.end(), positive) == 1)
        plan.anchor_slots[std::find_if(m.components.begin(), m.components.end(), positive)->sand_id] = m.slot;
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("malformed plan document: ") + e.what());
  }
}

MixturePlan plan_from_json_text(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) fail("malformed plan document: not JSON");
  return plan_from_json(doc);
}

}  // namespace sandtone
