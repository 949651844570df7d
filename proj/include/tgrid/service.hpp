#pragma once

// Session-scoped grid service. SessionStore holds the state and speaks in
// HTTP-shaped responses so it can be driven with or without a socket;
// HttpServer binds it to the /v1 routes.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "tgrid/grid.hpp"
#include "tgrid/strategy.hpp"

namespace httplib {
class Server;
}

namespace tgrid::service {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Parses a mutation request body. With `require_revision` the
/// "expected_revision" field is mandatory, otherwise it is accepted and
/// ignored. Throws std::invalid_argument with a readable message.
struct MutationRequest {
  Mutation mutation;
  std::optional<std::uint64_t> expected_revision;
};
MutationRequest parse_mutation_request(std::string_view body, bool require_revision);

class SessionStore {
 public:
  explicit SessionStore(std::uint32_t chunk_limit = kDefaultChunkLimit);

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  Response create(std::string_view document);
  Response get_grid(std::string_view id) const;
  Response mutate(std::string_view id, std::string_view body);
  Response report(std::string_view id) const;
  Response what_if(std::string_view id, std::string_view body) const;
  Response lint(std::string_view id) const;

  /// Current grid of a session, if it exists.
  std::optional<InvestmentGrid> grid(std::string_view id) const;
  std::vector<std::string> session_ids() const;

  /// Writes every session as `<id>.tgrid.json` into `dir`.
  void snapshot(const std::filesystem::path& dir) const;

 private:
  struct Session {
    std::string id;
    std::chrono::system_clock::time_point created_at;
    mutable std::mutex mutex;  // serializes mutations, guards `grid`
    std::shared_ptr<const InvestmentGrid> grid;

    std::shared_ptr<const InvestmentGrid> current() const;
  };

  std::shared_ptr<Session> find(std::string_view id) const;
  std::string fresh_id();

  std::uint32_t chunk_limit_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
};

class HttpServer {
 public:
  /// `ui_dir`, when set, is served as static files under "/".
  HttpServer(SessionStore& store, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns false if the socket cannot be bound
  /// or the UI directory does not exist.
  bool bind(const std::string& host, int port);
  int port() const noexcept { return port_; }

  /// Serves until stop(). Requires a successful bind().
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  SessionStore& store_;
  std::optional<std::filesystem::path> ui_dir_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
};

}  // namespace tgrid::service
