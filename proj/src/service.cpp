#include "tgrid/service.hpp"

#include <fstream>
#include <random>
#include <set>

#include "httplib.h"
#include "json.hpp"
#include "tgrid/persistence.hpp"

namespace tgrid::service {

using nlohmann::ordered_json;

namespace {

Response json_response(int status, const ordered_json& body) {
  return Response{status, body.dump() + "\n"};
}

Response error_response(int status, std::string_view code, std::string_view message,
                        const std::vector<Violation>* violations = nullptr) {
  ordered_json body{{"code", code}, {"message", message}};
  if (violations != nullptr) body["violations"] = violations_to_json(*violations);
  return json_response(status, body);
}

Response not_found(std::string_view id) {
  return error_response(404, "NOT_FOUND", "no session '" + std::string(id) + "'");
}

Response illegal(const GridError& e) {
  return error_response(422, to_string(e.code()), e.what(), &e.violations());
}

}  // namespace

MutationRequest parse_mutation_request(std::string_view body, bool require_revision) {
  ordered_json j;
  try {
    j = ordered_json::parse(body.begin(), body.end());
  } catch (const ordered_json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("mutation must be a JSON object");
  static const std::set<std::string, std::less<>> kAllowed{"op", "kpi", "entity", "band", "row",
                                                           "expected_revision"};
  for (const auto& [key, _] : j.items()) {
    if (!kAllowed.count(key)) throw std::invalid_argument("unknown key '" + key + "'");
  }

  auto string_field = [&j](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string()) {
      throw std::invalid_argument(std::string("'") + key + "' must be a string");
    }
    return j[key].get<std::string>();
  };
  auto uint_field = [&j](const char* key) -> std::uint64_t {
    const auto& v = j[key];
    if (!v.is_number_unsigned()) {
      throw std::invalid_argument(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };

  MutationRequest req;
  auto op = parse_mutation_op(string_field("op"));
  if (!op) throw std::invalid_argument("'op' must be place, unplace or move");
  req.mutation.op = *op;
  req.mutation.kpi_id = string_field("kpi");
  req.mutation.entity_id = string_field("entity");

  if (*op == MutationOp::Unplace) {
    if (j.contains("band") || j.contains("row")) {
      throw std::invalid_argument("unplace takes no band or row");
    }
  } else {
    auto band = parse_band(string_field("band"));
    if (!band) throw std::invalid_argument("'band' must be advanced, intermediate or novice");
    req.mutation.band = *band;
    if (!j.contains("row")) throw std::invalid_argument("'row' is required");
    auto row = uint_field("row");
    if (row > std::numeric_limits<std::uint32_t>::max()) {
      throw std::invalid_argument("'row' is out of range");
    }
    req.mutation.row = static_cast<std::uint32_t>(row);
  }

  if (j.contains("expected_revision")) {
    req.expected_revision = uint_field("expected_revision");
  } else if (require_revision) {
    throw std::invalid_argument("'expected_revision' is required");
  }
  return req;
}

std::shared_ptr<const InvestmentGrid> SessionStore::Session::current() const {
  std::lock_guard lock(mutex);
  return grid;
}

SessionStore::SessionStore(std::uint32_t chunk_limit) : chunk_limit_(chunk_limit) {
  if (chunk_limit_ < 1) throw std::invalid_argument("chunk limit must be at least 1");
}

std::string SessionStore::fresh_id() {
  static constexpr char kHex[] = "0123456789abcdef";
  std::random_device rd;
  std::string id;
  for (;;) {
    id.clear();
    for (int i = 0; i < 8; ++i) {
      auto word = rd();
      for (int nibble = 0; nibble < 4; ++nibble) {
        id.push_back(kHex[(word >> (nibble * 4)) & 0xF]);
      }
    }
    if (!sessions_.count(id)) return id;
  }
}

std::shared_ptr<SessionStore::Session> SessionStore::find(std::string_view id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response SessionStore::create(std::string_view document) {
  std::optional<InvestmentGrid> grid;
  try {
    grid = load_grid(document);
  } catch (const LoadError& e) {
    return error_response(400, to_string(e.kind()), e.what(),
                          e.violations().empty() ? nullptr : &e.violations());
  }

  auto session = std::make_shared<Session>();
  session->created_at = std::chrono::system_clock::now();
  session->grid = std::make_shared<const InvestmentGrid>(std::move(*grid));
  auto revision = session->grid->revision();
  {
    std::unique_lock lock(sessions_mutex_);
    session->id = fresh_id();
    sessions_.emplace(session->id, session);
  }
  return json_response(201, {{"id", session->id}, {"revision", revision}});
}

Response SessionStore::get_grid(std::string_view id) const {
  auto session = find(id);
  if (!session) return not_found(id);
  return Response{200, save_grid(*session->current())};
}

Response SessionStore::mutate(std::string_view id, std::string_view body) {
  auto session = find(id);
  if (!session) return not_found(id);

  MutationRequest req;
  try {
    req = parse_mutation_request(body, true);
  } catch (const std::invalid_argument& e) {
    return error_response(400, "SCHEMA", e.what());
  }

  std::lock_guard lock(session->mutex);
  auto current = session->grid->revision();
  if (*req.expected_revision != current) {
    ordered_json body_json{{"code", "REVISION_MISMATCH"},
                           {"message", "expected revision " +
                                           std::to_string(*req.expected_revision) +
                                           ", current is " + std::to_string(current)},
                           {"revision", current}};
    return json_response(409, body_json);
  }
  try {
    auto next = std::make_shared<const InvestmentGrid>(apply(*session->grid, req.mutation));
    session->grid = std::move(next);
  } catch (const GridError& e) {
    return illegal(e);
  }
  return json_response(200, {{"revision", session->grid->revision()}});
}

Response SessionStore::report(std::string_view id) const {
  auto session = find(id);
  if (!session) return not_found(id);
  return json_response(200, report_to_json(assess(*session->current(), chunk_limit_)));
}

Response SessionStore::what_if(std::string_view id, std::string_view body) const {
  auto session = find(id);
  if (!session) return not_found(id);

  MutationRequest req;
  try {
    req = parse_mutation_request(body, false);
  } catch (const std::invalid_argument& e) {
    return error_response(400, "SCHEMA", e.what());
  }
  try {
    return json_response(200,
                         what_if_to_json(tgrid::what_if(*session->current(), req.mutation,
                                                        chunk_limit_)));
  } catch (const GridError& e) {
    return illegal(e);
  }
}

Response SessionStore::lint(std::string_view id) const {
  auto session = find(id);
  if (!session) return not_found(id);
  auto grid = session->current();
  return json_response(200, {{"grid_revision", grid->revision()},
                             {"warnings", warnings_to_json(chunk_lint(*grid, chunk_limit_))}});
}

std::optional<InvestmentGrid> SessionStore::grid(std::string_view id) const {
  auto session = find(id);
  if (!session) return std::nullopt;
  return *session->current();
}

std::vector<std::string> SessionStore::session_ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, _] : sessions_) ids.push_back(id);
  return ids;
}

void SessionStore::snapshot(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& id : session_ids()) {
    auto session = find(id);
    if (!session) continue;
    std::ofstream out(dir / (id + ".tgrid.json"), std::ios::binary | std::ios::trunc);
    out << save_grid(*session->current());
    if (!out) throw std::runtime_error("failed to write snapshot for session " + id);
  }
}

HttpServer::HttpServer(SessionStore& store, std::optional<std::filesystem::path> ui_dir)
    : store_(store), ui_dir_(std::move(ui_dir)), server_(std::make_unique<httplib::Server>()) {
  // The library default turns on SO_REUSEPORT, which lets a second server
  // silently share a port that is already taken. Plain SO_REUSEADDR keeps
  // quick restarts working while making a real conflict fail to bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

namespace {

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

void HttpServer::install_routes() {
  auto& s = *server_;
  s.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
  s.Post("/v1/grids", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, store_.create(req.body));
  });
  s.Get(R"(/v1/grids/([A-Za-z0-9]+))", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, store_.get_grid(req.matches[1].str()));
  });
  s.Post(R"(/v1/grids/([A-Za-z0-9]+)/mutations)",
         [this](const httplib::Request& req, httplib::Response& res) {
           send(res, store_.mutate(req.matches[1].str(), req.body));
         });
  s.Get(R"(/v1/grids/([A-Za-z0-9]+)/report)",
        [this](const httplib::Request& req, httplib::Response& res) {
          send(res, store_.report(req.matches[1].str()));
        });
  s.Post(R"(/v1/grids/([A-Za-z0-9]+)/what-if)",
         [this](const httplib::Request& req, httplib::Response& res) {
           send(res, store_.what_if(req.matches[1].str(), req.body));
         });
  s.Get(R"(/v1/grids/([A-Za-z0-9]+)/lint)",
        [this](const httplib::Request& req, httplib::Response& res) {
          send(res, store_.lint(req.matches[1].str()));
        });
  s.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        send(res, error_response(500, "INTERNAL", message));
      });
}

bool HttpServer::bind(const std::string& host, int port) {
  if (ui_dir_ && !server_->set_mount_point("/", ui_dir_->string())) return false;
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    return port_ > 0;
  }
  if (!server_->bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

bool HttpServer::run() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace tgrid::service
