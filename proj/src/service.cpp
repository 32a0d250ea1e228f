#include "sandtone/service.hpp"

#include "sandtone/error.hpp"
#include "sandtone/image_io.hpp"
#include "sandtone/session_store.hpp"
#include "sandtone/workspace.hpp"

#include <charconv>

#include <httplib.h>

namespace sandtone {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const std::string& body) {
  res.status = status;
  res.set_content(body, "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  send_json(res, status, json{{"code", code}, {"message", message}}.dump());
}

void send_error(httplib::Response& res, const Error& e) {
  const std::string msg = e.what();
  switch (e.kind()) {
    case ErrorKind::NotFound: return send_error(res, 404, "not_found", msg);
    case ErrorKind::Unsupported: return send_error(res, 415, "unsupported_media", msg);
    case ErrorKind::TooLarge: return send_error(res, 413, "too_large", msg);
    case ErrorKind::Io: return send_error(res, 500, "io_error", msg);
    case ErrorKind::InvalidInput: break;
  }
  std::string code = "invalid_input";
  if (msg.rfind("threshold collision", 0) == 0) code = "threshold_collision";
  else if (msg.rfind("size mismatch", 0) == 0) code = "size_mismatch";
  send_error(res, 422, code, msg);
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json doc = json::parse(req.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw std::invalid_argument("request body must be a JSON object");
  return doc;
}

std::span<const std::uint8_t> bytes_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

const httplib::MultipartFormData* file_part(const httplib::Request& req, const std::string& preferred) {
  auto it = req.files.find(preferred);
  if (it != req.files.end()) return &it->second;
  for (const auto& [name, part] : req.files)
    if (!part.filename.empty()) return &part;
  return nullptr;
}

int to_int(const std::string& text, const char* what) {
  int v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) fail(std::string("invalid ") + what);
  return v;
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const json::exception& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const std::invalid_argument& e) {
      send_error(res, 400, "bad_request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

struct Service::Impl {
  explicit Impl(const std::filesystem::path& dir) : store(dir) {}

  SessionStore store;
  httplib::Server server;
  int port = -1;

  void routes();
};

void Service::Impl::routes() {
  server.set_payload_max_length(kMaxUploadBytes + (1u << 20));
  // SO_REUSEADDR only: a second server on a busy port must fail to bind.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 413) return send_error(res, 413, "too_large", "request exceeds the 32 MB upload limit");
    if (res.status == 404) return send_error(res, 404, "not_found", "no such endpoint");
    send_error(res, res.status, "http_error", httplib::status_message(res.status));
  });

  server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    std::optional<std::uint64_t> seed;
    if (body.contains("seed")) seed = body["seed"].get<std::uint64_t>();
    send_json(res, 201, session_to_json(store.create(seed)).dump());
  }));

  server.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, session_to_json(store.get(req.matches[1])).dump());
  }));

  server.Post(R"(/sessions/([^/]+)/sands)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const httplib::MultipartFormData* part = file_part(req, "file");
    if (!part) return send_error(res, 400, "bad_request", "expected a multipart image upload");
    const std::string filename = part->filename.empty() ? "sand.png" : part->filename;
    SandSample sand = store.add_sand(req.matches[1], bytes_of(part->content), filename);
    send_json(res, 201, json{{"sand_id", sand.id}, {"name", sand.name}, {"mean_gray", sand.mean_gray}}.dump());
  }));

  server.Delete(R"(/sessions/([^/]+)/sands/([^/]+))",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  store.remove_sand(req.matches[1], req.matches[2]);
                  res.status = 204;
                }));

  server.Post(R"(/sessions/([^/]+)/plan)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    PlanRequest request;
    request.set_size = body.value("set_size", kDefaultSetSize);
    if (body.contains("seed")) request.seed = body["seed"].get<std::uint64_t>();
    if (body.contains("swatch_width") || body.contains("swatch_height")) {
      SynthesisParams p;
      p.width = body.value("swatch_width", kDefaultSwatchSize);
      p.height = body.value("swatch_height", kDefaultSwatchSize);
      if (p.width < 2 || p.height < 2) fail("swatch must be at least 2x2");
      request.swatch_size = p;
    }
    send_json(res, 200, plan_to_json_text(store.make_plan(req.matches[1], request)));
  }));

  server.Get(R"(/sessions/([^/]+)/plan)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, store.plan_json(req.matches[1]));
  }));

  server.Get(R"(/sessions/([^/]+)/swatches/(\d+))",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               auto png = store.swatch_png(req.matches[1], to_int(req.matches[2], "slot"));
               res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
             }));

  server.Patch(R"(/sessions/([^/]+)/table)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    AssignmentTable t = store.patch_table(req.matches[1], body.at("index").get<int>(), body.at("threshold").get<int>());
    send_json(res, 200, json{{"thresholds", t.thresholds()}}.dump());
  }));

  server.Post(R"(/sessions/([^/]+)/render)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const httplib::MultipartFormData* part = file_part(req, "source");
    if (!part) return send_error(res, 400, "bad_request", "expected a multipart source image");
    if (part->content.size() > kMaxUploadBytes) throw Error(ErrorKind::TooLarge, "source exceeds the 32 MB upload limit");

    int block = 8;
    if (auto it = req.files.find("block_size"); it != req.files.end()) block = to_int(it->second.content, "block_size");
    else if (req.has_param("block_size")) block = to_int(req.get_param_value("block_size"), "block_size");

    RgbImage source = decode_image(bytes_of(part->content)).image;
    RenderTicket t = store.submit_render(req.matches[1], std::move(source), block);
    json body{{"render_id", t.render_id}};
    switch (t.state) {
      case RenderState::Done:
        body["status"] = "done";
        return send_json(res, 200, body.dump());
      case RenderState::Pending:
        body["status"] = "pending";
        return send_json(res, 202, body.dump());
      case RenderState::Failed:
        return send_error(res, 500, "render_failed", t.error);
    }
  }));

  server.Get(R"(/renders/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    RenderTicket t = store.render_status(req.matches[1]);
    if (t.state == RenderState::Pending)
      return send_json(res, 202, json{{"render_id", t.render_id}, {"status", "pending"}}.dump());
    if (t.state == RenderState::Failed) return send_error(res, 500, "render_failed", t.error);
    auto png = store.render_png(t.render_id);
    res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
  }));

  server.Get(R"(/renders/([^/]+)/slot-map)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    RenderTicket t = store.render_status(req.matches[1]);
    if (t.state == RenderState::Pending)
      return send_json(res, 202, json{{"render_id", t.render_id}, {"status", "pending"}}.dump());
    if (t.state == RenderState::Failed) return send_error(res, 500, "render_failed", t.error);
    send_json(res, 200, store.render_slot_map(t.render_id));
  }));

  server.Get(R"(/sessions/([^/]+)/recipe)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    res.set_content(store.recipe_csv(req.matches[1]), "text/csv");
  }));
}

Service::Service(const std::filesystem::path& state_dir) : impl_(std::make_unique<Impl>(state_dir)) {
  impl_->routes();
}

Service::~Service() { stop(); }

bool Service::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    return impl_->port > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  impl_->port = port;
  return true;
}

int Service::port() const noexcept { return impl_->port; }

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

SessionStore& Service::store() { return impl_->store; }

}  // namespace sandtone
