#pragma once

// Session state behind the HTTP service, persisted as plain files:
//
//   <state>/sessions/<id>/session.json
//   <state>/sessions/<id>/sands/<sand id>.png
//   <state>/sessions/<id>/plan.json            (same layout as `sandtone plan`)
//   <state>/renders/<render id>/{render.png,slot_map.json,status.json}
//
// Each session has its own reader/writer lock; renders for different
// sessions run concurrently.

#include "sandtone/converter.hpp"
#include "sandtone/planner.hpp"
#include "sandtone/texture.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace sandtone {

/// Sources larger than this many pixels render asynchronously.
inline constexpr std::size_t kSyncRenderPixels = 512u * 512u;

struct Session {
  std::string id;
  std::string created_at;  // ISO 8601, UTC
  std::uint64_t seed = 0;
  SynthesisParams swatch_params;  // seed field unused; `seed` above governs
  std::vector<SandSample> sands;  // upload order
  std::optional<MixturePlan> plan;
  AssignmentTable table = default_table(kDefaultSetSize);
};

nlohmann::ordered_json session_to_json(const Session& s);

struct PlanRequest {
  int set_size = kDefaultSetSize;
  std::optional<std::uint64_t> seed;
  std::optional<SynthesisParams> swatch_size;
};

enum class RenderState { Pending, Done, Failed };

struct RenderTicket {
  std::string render_id;
  RenderState state = RenderState::Pending;
  std::string error;
};

class SessionStore {
 public:
  /// Creates the state directory if needed and reloads every persisted session.
  explicit SessionStore(std::filesystem::path state_dir);
  ~SessionStore();

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  Session create(std::optional<std::uint64_t> seed = std::nullopt);
  Session get(const std::string& session_id) const;

  /// Adds a sand; any existing plan is dropped because it no longer matches.
  SandSample add_sand(const std::string& session_id, std::span<const std::uint8_t> bytes,
                      const std::string& filename);
  void remove_sand(const std::string& session_id, const std::string& sand_id);

  /// Builds the plan from the session's sands and resets the table to
  /// default_table(set_size).
  MixturePlan make_plan(const std::string& session_id, const PlanRequest& request);
  MixturePlan plan(const std::string& session_id) const;
  std::string plan_json(const std::string& session_id) const;
  std::string recipe_csv(const std::string& session_id) const;

  std::vector<std::uint8_t> swatch_png(const std::string& session_id, int slot);

  AssignmentTable patch_table(const std::string& session_id, int index, int threshold);

  /// Runs synchronously for sources up to kSyncRenderPixels, otherwise in the
  /// background; poll with render_status.
  RenderTicket submit_render(const std::string& session_id, RgbImage source, int block_size);
  RenderTicket render_status(const std::string& render_id) const;
  std::vector<std::uint8_t> render_png(const std::string& render_id) const;
  std::string render_slot_map(const std::string& render_id) const;

  /// Blocks until background renders finish.
  void drain();

  const std::filesystem::path& state_dir() const noexcept { return state_dir_; }

 private:
  struct Entry {
    mutable std::shared_mutex mutex;
    Session session;
    std::map<int, std::vector<std::uint8_t>> swatch_cache;
  };

  std::shared_ptr<Entry> find(const std::string& session_id) const;
  std::filesystem::path session_dir(const std::string& session_id) const;
  std::filesystem::path render_dir(const std::string& render_id) const;
  void persist(const Entry& entry) const;
  void load_all();
  void run_render(const std::string& render_id, RenderJob job);
  void set_render_state(const std::string& render_id, RenderState state, const std::string& error);

  std::filesystem::path state_dir_;

  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_session_ = 1;

  mutable std::mutex renders_mutex_;
  std::map<std::string, RenderTicket> renders_;
  std::uint64_t next_render_ = 1;
  std::vector<std::jthread> workers_;
};

}  // namespace sandtone
