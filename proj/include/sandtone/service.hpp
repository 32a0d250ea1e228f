#pragma once

// HTTP front end over SessionStore.
//
//   POST   /sessions                      {seed?}                    -> session
//   GET    /sessions/{id}                                            -> session
//   POST   /sessions/{id}/sands           multipart image            -> {sand_id, mean_gray}
//   DELETE /sessions/{id}/sands/{sid}
//   POST   /sessions/{id}/plan            {set_size, seed, swatch_width?, swatch_height?} -> plan
//   GET    /sessions/{id}/plan                                       -> plan
//   GET    /sessions/{id}/swatches/{slot}                            -> PNG
//   PATCH  /sessions/{id}/table           {index, threshold}         -> {thresholds}
//   POST   /sessions/{id}/render          multipart source + block_size -> {render_id, status}
//   GET    /renders/{rid}                                            -> PNG (202 while pending)
//   GET    /renders/{rid}/slot-map                                   -> slot map JSON
//   GET    /sessions/{id}/recipe                                     -> CSV
//
// Errors are {code, message} with a 4xx/5xx status.

#include <filesystem>
#include <memory>
#include <string>

namespace sandtone {

class SessionStore;

class Service {
 public:
  explicit Service(const std::filesystem::path& state_dir);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Port 0 picks a free port. Returns false if the socket cannot be bound.
  bool bind(const std::string& host, int port);
  int port() const noexcept;

  /// Serves until stop(); requires a successful bind().
  void listen();
  void stop();
  /// Blocks until listen() is accepting connections.
  void wait_until_ready() const;

  SessionStore& store();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sandtone
