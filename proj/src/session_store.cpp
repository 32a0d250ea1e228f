#include "sandtone/session_store.hpp"

#include "sandtone/error.hpp"
#include "sandtone/image_io.hpp"
#include "sandtone/workspace.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>

namespace sandtone {

namespace fs = std::filesystem;

namespace {

std::string now_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Numeric suffix of ids like "s12" / "r3"; 0 if it does not parse.
std::uint64_t id_number(const std::string& id) {
  if (id.size() < 2) return 0;
  std::uint64_t n = 0;
  for (std::size_t i = 1; i < id.size(); ++i) {
    if (id[i] < '0' || id[i] > '9') return 0;
    n = n * 10 + static_cast<std::uint64_t>(id[i] - '0');
  }
  return n;
}

void write_atomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  write_file(tmp, text);
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

const char* state_name(RenderState s) {
  switch (s) {
    case RenderState::Pending: return "pending";
    case RenderState::Done: return "done";
    case RenderState::Failed: return "failed";
  }
  return "failed";
}

}  // namespace

nlohmann::ordered_json session_to_json(const Session& s) {
  nlohmann::ordered_json doc;
  doc["id"] = s.id;
  doc["created_at"] = s.created_at;
  doc["seed"] = s.seed;
  doc["swatch_width"] = s.swatch_params.width;
  doc["swatch_height"] = s.swatch_params.height;
  doc["sands"] = nlohmann::ordered_json::array();
  for (const SandSample& sand : s.sands) {
    doc["sands"].push_back({{"id", sand.id},
                            {"name", sand.name},
                            {"mean_gray", sand.mean_gray},
                            {"source_file", sand.source_file}});
  }
  doc["has_plan"] = s.plan.has_value();
  doc["set_size"] = s.plan ? nlohmann::ordered_json(s.plan->set_size) : nlohmann::ordered_json(nullptr);
  doc["table"] = s.table.thresholds();
  return doc;
}

SessionStore::SessionStore(fs::path state_dir) : state_dir_(std::move(state_dir)) {
  fs::create_directories(state_dir_ / "sessions");
  fs::create_directories(state_dir_ / "renders");
  load_all();
}

SessionStore::~SessionStore() { drain(); }

fs::path SessionStore::session_dir(const std::string& id) const { return state_dir_ / "sessions" / id; }
fs::path SessionStore::render_dir(const std::string& id) const { return state_dir_ / "renders" / id; }

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorKind::NotFound, "unknown session " + id);
  return it->second;
}

void SessionStore::persist(const Entry& entry) const {
  const fs::path dir = session_dir(entry.session.id);
  fs::create_directories(dir);
  write_atomically(dir / "session.json", session_to_json(entry.session).dump(2) + "\n");
}

void SessionStore::load_all() {
  for (const auto& d : fs::directory_iterator(state_dir_ / "sessions")) {
    const fs::path file = d.path() / "session.json";
    if (!fs::exists(file)) continue;
    const auto doc = nlohmann::json::parse(read_text(file));

    auto entry = std::make_shared<Entry>();
    Session& s = entry->session;
    s.id = doc.at("id").get<std::string>();
    s.created_at = doc.at("created_at").get<std::string>();
    s.seed = doc.at("seed").get<std::uint64_t>();
    s.swatch_params.width = doc.at("swatch_width").get<int>();
    s.swatch_params.height = doc.at("swatch_height").get<int>();
    for (const auto& j : doc.at("sands")) {
      SandSample sand;
      sand.id = j.at("id").get<std::string>();
      sand.name = j.at("name").get<std::string>();
      sand.source_file = j.at("source_file").get<std::string>();
      sand.image = std::make_shared<const RgbImage>(load_image(d.path() / sand.source_file).image);
      sand.mean_gray = mean_gray_rgb(*sand.image).mean;
      s.sands.push_back(std::move(sand));
    }
    s.table = AssignmentTable(doc.at("table").get<std::vector<int>>());
    if (doc.at("has_plan").get<bool>()) s.plan = load_plan_with_images(d.path() / "plan.json");

    next_session_ = std::max(next_session_, id_number(s.id) + 1);
    sessions_.emplace(s.id, std::move(entry));
  }

  for (const auto& d : fs::directory_iterator(state_dir_ / "renders")) {
    const std::string id = d.path().filename().string();
    next_render_ = std::max(next_render_, id_number(id) + 1);
    RenderTicket t{id, RenderState::Failed, "render interrupted"};
    if (fs::exists(d.path() / "status.json")) {
      const auto doc = nlohmann::json::parse(read_text(d.path() / "status.json"));
      const std::string st = doc.value("status", "failed");
      if (st == "done") t = {id, RenderState::Done, ""};
      else if (st == "failed") t.error = doc.value("error", t.error);
    }
    renders_[id] = t;
  }
}

Session SessionStore::create(std::optional<std::uint64_t> seed) {
  auto entry = std::make_shared<Entry>();
  {
    std::lock_guard lock(sessions_mutex_);
    entry->session.id = "s" + std::to_string(next_session_++);
    entry->session.created_at = now_iso8601();
    entry->session.seed = seed.value_or(0);
    sessions_.emplace(entry->session.id, entry);
  }
  std::unique_lock lock(entry->mutex);
  persist(*entry);
  return entry->session;
}

Session SessionStore::get(const std::string& id) const {
  auto entry = find(id);
  std::shared_lock lock(entry->mutex);
  return entry->session;
}

SandSample SessionStore::add_sand(const std::string& id, std::span<const std::uint8_t> bytes,
                                  const std::string& filename) {
  auto entry = find(id);
  std::unique_lock lock(entry->mutex);
  Session& s = entry->session;
  std::set<std::string> taken;
  for (const SandSample& sand : s.sands) taken.insert(sand.id);
  ImportedSand imported = import_sand(bytes, filename, taken);
  store_sand(session_dir(id), imported.sample);
  s.sands.push_back(imported.sample);

  s.plan.reset();
  fs::remove(session_dir(id) / "plan.json");
  entry->swatch_cache.clear();
  persist(*entry);
  return imported.sample;
}

void SessionStore::remove_sand(const std::string& id, const std::string& sand_id) {
  auto entry = find(id);
  std::unique_lock lock(entry->mutex);
  Session& s = entry->session;
  auto it = std::find_if(s.sands.begin(), s.sands.end(), [&](const SandSample& x) { return x.id == sand_id; });
  if (it == s.sands.end()) throw Error(ErrorKind::NotFound, "unknown sand id " + sand_id);
  fs::remove(session_dir(id) / it->source_file);
  s.sands.erase(it);

  s.plan.reset();
  fs::remove(session_dir(id) / "plan.json");
  entry->swatch_cache.clear();
  persist(*entry);
}

MixturePlan SessionStore::make_plan(const std::string& id, const PlanRequest& request) {
  auto entry = find(id);
  std::unique_lock lock(entry->mutex);
  Session& s = entry->session;
  MixturePlan plan = build_plan(s.sands, request.set_size);

  s.plan = plan;
  if (request.seed) s.seed = *request.seed;
  if (request.swatch_size) {
    s.swatch_params.width = request.swatch_size->width;
    s.swatch_params.height = request.swatch_size->height;
  }
  s.table = default_table(plan.set_size);
  entry->swatch_cache.clear();
  write_atomically(session_dir(id) / "plan.json", plan_to_json_text(plan));
  persist(*entry);
  return plan;
}

MixturePlan SessionStore::plan(const std::string& id) const {
  auto entry = find(id);
  std::shared_lock lock(entry->mutex);
  if (!entry->session.plan) throw Error(ErrorKind::NotFound, "session " + id + " has no plan");
  return *entry->session.plan;
}

std::string SessionStore::plan_json(const std::string& id) const { return plan_to_json_text(plan(id)); }

std::string SessionStore::recipe_csv(const std::string& id) const { return plan_to_csv(plan(id)); }

std::vector<std::uint8_t> SessionStore::swatch_png(const std::string& id, int slot) {
  auto entry = find(id);
  {
    std::shared_lock lock(entry->mutex);
    if (!entry->session.plan) throw Error(ErrorKind::NotFound, "session " + id + " has no plan");
    if (slot < 1 || slot > entry->session.plan->set_size)
      throw Error(ErrorKind::NotFound, "no slot " + std::to_string(slot));
    // the cache is only mutated under the exclusive lock
    auto it = entry->swatch_cache.find(slot);
    if (it != entry->swatch_cache.end()) return it->second;
  }
  std::unique_lock lock(entry->mutex);
  const Session& s = entry->session;
  if (!s.plan || slot > s.plan->set_size) throw Error(ErrorKind::NotFound, "session " + id + " has no plan");
  auto it = entry->swatch_cache.find(slot);
  if (it != entry->swatch_cache.end()) return it->second;

  SynthesisParams p = s.swatch_params;
  p.seed = swatch_seed(s.seed, slot);
  auto png = encode_png(synthesize(s.plan->mixtures[slot - 1], sand_images(*s.plan), p).image);
  entry->swatch_cache.emplace(slot, png);
  return png;
}

AssignmentTable SessionStore::patch_table(const std::string& id, int index, int threshold) {
  auto entry = find(id);
  std::unique_lock lock(entry->mutex);
  entry->session.table = adjust_table(entry->session.table, index, threshold);
  persist(*entry);
  return entry->session.table;
}

RenderTicket SessionStore::submit_render(const std::string& id, RgbImage source, int block_size) {
  RenderJob job;
  {
    auto entry = find(id);
    std::shared_lock lock(entry->mutex);
    const Session& s = entry->session;
    if (!s.plan) fail("session " + id + " has no plan");
    job.plan = *s.plan;
    job.table = s.table;
    job.seed = s.seed;
    job.swatch_params = s.swatch_params;
  }
  job.source = std::move(source);
  job.block_size = block_size;
  // Reject bad jobs before allocating an id.
  if (job.source.empty()) fail("empty image");
  if (job.table.set_size() != job.plan.set_size) fail("size mismatch");
  if (block_size < kMinBlockSize) fail("block size must be at least 2");
  if (block_size > job.swatch_params.width || block_size > job.swatch_params.height)
    fail("block larger than swatch");

  std::string rid;
  {
    std::lock_guard lock(renders_mutex_);
    rid = "r" + std::to_string(next_render_++);
    renders_[rid] = {rid, RenderState::Pending, ""};
  }
  fs::create_directories(render_dir(rid));
  write_atomically(render_dir(rid) / "status.json", R"({"status":"pending","session":")" + id + "\"}\n");

  if (job.source.size() <= kSyncRenderPixels) {
    run_render(rid, std::move(job));
  } else {
    std::lock_guard lock(renders_mutex_);
    workers_.emplace_back([this, rid, j = std::move(job)]() mutable { run_render(rid, std::move(j)); });
  }
  return render_status(rid);
}

void SessionStore::run_render(const std::string& rid, RenderJob job) {
  try {
    SandRender out = render(job);
    write_png(render_dir(rid) / "render.png", out.image);
    write_file(render_dir(rid) / "slot_map.json", slot_map_to_json_text(out.slot_map, job.block_size));
    set_render_state(rid, RenderState::Done, "");
  } catch (const std::exception& e) {
    set_render_state(rid, RenderState::Failed, e.what());
  }
}

void SessionStore::set_render_state(const std::string& rid, RenderState state, const std::string& error) {
  nlohmann::ordered_json doc;
  doc["status"] = state_name(state);
  if (!error.empty()) doc["error"] = error;
  write_atomically(render_dir(rid) / "status.json", doc.dump() + "\n");
  std::lock_guard lock(renders_mutex_);
  renders_[rid] = {rid, state, error};
}

RenderTicket SessionStore::render_status(const std::string& rid) const {
  std::lock_guard lock(renders_mutex_);
  auto it = renders_.find(rid);
  if (it == renders_.end()) throw Error(ErrorKind::NotFound, "unknown render " + rid);
  return it->second;
}

std::vector<std::uint8_t> SessionStore::render_png(const std::string& rid) const {
  if (render_status(rid).state != RenderState::Done) throw Error(ErrorKind::NotFound, "render " + rid + " not ready");
  return read_file(render_dir(rid) / "render.png");
}

std::string SessionStore::render_slot_map(const std::string& rid) const {
  if (render_status(rid).state != RenderState::Done) throw Error(ErrorKind::NotFound, "render " + rid + " not ready");
  return read_text(render_dir(rid) / "slot_map.json");
}

void SessionStore::drain() {
  std::vector<std::jthread> done;
  {
    std::lock_guard lock(renders_mutex_);
    done.swap(workers_);
  }
  done.clear();
}

}  // namespace sandtone
