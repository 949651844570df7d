#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "tgrid/grid.hpp"
#include "tgrid/persistence.hpp"
#include "tgrid/service.hpp"
#include "tgrid/strategy.hpp"

namespace tgrid::cli {

namespace {

std::atomic<bool> g_shutdown{false};

// Domain failure: message goes to stderr, exit code 1.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Bad flag values that CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) throw DomainError("cannot write " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DomainError("cannot write " + path.string());
  }
}

std::uint32_t parse_uint(std::string_view text, std::string_view what) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError(std::string(what) + " must be a non-negative integer, got '" +
                     std::string(text) + "'");
  }
  return value;
}

std::uint32_t chunk_limit_from_env() {
  const char* raw = std::getenv("TGRID_CHUNK_LIMIT");
  if (raw == nullptr || *raw == '\0') return kDefaultChunkLimit;
  auto limit = parse_uint(raw, "TGRID_CHUNK_LIMIT");
  if (limit < 1) throw UsageError("TGRID_CHUNK_LIMIT must be at least 1");
  return limit;
}

CompetenceBand parse_band_arg(const std::string& text) {
  auto band = parse_band(text);
  if (!band) throw UsageError("band must be advanced, intermediate or novice, got '" + text + "'");
  return *band;
}

BandSpec parse_bands(const std::string& text) {
  std::vector<std::uint32_t> parts;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) parts.push_back(parse_uint(piece, "--bands"));
  if (parts.size() != 3) throw DomainError("--bands expects three values a,i,n");
  if (std::any_of(parts.begin(), parts.end(), [](std::uint32_t c) { return c < 1; })) {
    throw DomainError("band capacities must be at least 1");
  }
  return BandSpec{parts[0], parts[1], parts[2]};
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// One entry per line; blank lines and '#' comments are skipped.
std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

// "Name" or "Name | description".
std::vector<Kpi> read_kpis(const std::string& path) {
  std::vector<Kpi> kpis;
  for (const auto& line : read_lines(path)) {
    Kpi k;
    auto bar = line.find('|');
    k.name = trim(line.substr(0, bar));
    if (bar != std::string::npos) k.description = trim(line.substr(bar + 1));
    k.id = slugify(k.name);
    if (k.id.empty()) throw DomainError("kpi name '" + k.name + "' has no usable id");
    kpis.push_back(std::move(k));
  }
  return kpis;
}

// A leading '*' marks the subject.
std::vector<Entity> read_entities(const std::string& path) {
  std::vector<Entity> entities;
  for (auto line : read_lines(path)) {
    Entity e;
    if (line.front() == '*') {
      e.subject = true;
      line = trim(line.substr(1));
    }
    e.name = line;
    e.id = slugify(line);
    if (e.id.empty()) throw DomainError("entity name '" + line + "' has no usable id");
    entities.push_back(std::move(e));
  }
  return entities;
}

void print_violations(std::ostream& err, const std::vector<Violation>& violations) {
  for (const auto& v : violations) {
    err << to_string(v.code);
    if (v.kpi_id) err << " kpi=" << *v.kpi_id;
    if (v.entity_id) err << " entity=" << *v.entity_id;
    err << ": " << v.message << "\n";
  }
}

struct MutationArgs {
  std::string path;
  std::string kpi;
  std::string entity;
  std::string band;
  std::string row;
};

Mutation to_mutation(MutationOp op, const MutationArgs& a) {
  Mutation m{op, a.kpi, a.entity, std::nullopt, std::nullopt};
  if (op != MutationOp::Unplace) {
    if (a.band.empty() || a.row.empty()) {
      throw UsageError(std::string(to_string(op)) + " requires a band and a row");
    }
    m.band = parse_band_arg(a.band);
    m.row = parse_uint(a.row, "row");
  }
  return m;
}

int cmd_edit(MutationOp op, const MutationArgs& a, std::ostream& out) {
  auto mutation = to_mutation(op, a);
  auto grid = load_grid(read_file(a.path));
  auto next = apply(grid, mutation);
  write_file(a.path, save_grid(next));
  out << "revision " << next.revision() << "\n";
  return kExitOk;
}

int cmd_whatif(MutationOp op, const MutationArgs& a, const std::string& format,
               std::ostream& out) {
  auto mutation = to_mutation(op, a);
  auto grid = load_grid(read_file(a.path));
  auto result = what_if(grid, mutation, chunk_limit_from_env());
  if (format == "json") {
    out << what_if_to_json(result).dump(2) << "\n";
    return kExitOk;
  }

  out << "what-if: " << to_string(op) << " " << a.entity << " in " << a.kpi;
  if (mutation.band) out << " -> " << to_string(*mutation.band) << " row " << *mutation.row;
  out << "\n";
  if (result.deltas.empty()) {
    out << "no changes\n";
    return kExitOk;
  }
  std::size_t field_width = 5;
  std::size_t old_width = 6;
  for (const auto& d : result.deltas) {
    field_width = std::max(field_width, d.field.size());
    old_width = std::max(old_width, d.old_value.size());
  }
  std::string current_kpi;
  for (const auto& d : result.deltas) {
    if (d.kpi_id != current_kpi) {
      current_kpi = d.kpi_id;
      const Kpi* kpi = grid.find_kpi(d.kpi_id);
      out << "\n" << (kpi ? kpi->name : d.kpi_id) << " (" << d.kpi_id << ")\n";
      out << "  " << std::left << std::setw(static_cast<int>(field_width)) << "field" << "  "
          << std::setw(static_cast<int>(old_width)) << "before" << "  after\n";
    }
    out << "  " << std::left << std::setw(static_cast<int>(field_width)) << d.field << "  "
        << std::setw(static_cast<int>(old_width)) << d.old_value << "  " << d.new_value << "\n";
  }
  return kExitOk;
}

int cmd_serve(const std::string& host, int port, const std::string& ui_dir,
              const std::string& snapshot_dir, std::ostream& out, std::ostream& err) {
  if (!ui_dir.empty() && !std::filesystem::is_directory(ui_dir)) {
    err << "error: --ui-dir " << ui_dir << " is not a directory\n";
    return kExitDomain;
  }
  service::SessionStore store(chunk_limit_from_env());
  std::optional<std::filesystem::path> ui;
  if (!ui_dir.empty()) ui = ui_dir;
  service::HttpServer server(store, ui);
  if (!server.bind(host, port)) {
    err << "error: cannot bind " << host << ":" << port << "\n";
    return kExitDomain;
  }
  out << "listening on http://" << host << ":" << server.port() << "\n" << std::flush;

  g_shutdown = false;
  std::atomic<bool> finished{false};
  std::thread watcher([&] {
    while (!finished) {
      if (g_shutdown.exchange(false)) {
        server.stop();
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });
  bool ok = server.run();
  finished = true;
  watcher.join();

  if (!snapshot_dir.empty()) {
    store.snapshot(snapshot_dir);
    out << "snapshot written to " << snapshot_dir << "\n";
  }
  return ok ? kExitOk : kExitDomain;
}

}  // namespace

void request_shutdown() { g_shutdown = true; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"T-algorithm competitor grid tool", "tgrid"};
  app.require_subcommand(1);

  std::string path;
  std::string kpis_source = "default";
  std::string entities_file;
  std::string bands_text = "6,2,3";
  bool force = false;
  auto* init = app.add_subcommand("init", "Write a new empty grid document");
  init->add_option("path", path, "Output file")->required();
  init->add_option("--kpis", kpis_source, "'default' or a file with one KPI name per line");
  init->add_option("--entities", entities_file,
                   "File with one entity name per line; prefix the subject with '*'");
  init->add_option("--bands", bands_text, "Band capacities advanced,intermediate,novice");
  init->add_flag("--force", force, "Overwrite an existing file");

  auto* validate_cmd = app.add_subcommand("validate", "Check a grid document");
  validate_cmd->add_option("path", path, "Grid file")->required();

  MutationArgs margs;
  auto add_target = [&margs](CLI::App* sub, bool with_cell) {
    sub->add_option("path", margs.path, "Grid file")->required();
    sub->add_option("kpi", margs.kpi, "KPI id")->required();
    sub->add_option("entity", margs.entity, "Entity id")->required();
    if (with_cell) {
      sub->add_option("band", margs.band, "advanced | intermediate | novice")->required();
      sub->add_option("row", margs.row, "Row within the band, 0 is highest")->required();
    }
  };
  auto* place_cmd = app.add_subcommand("place", "Place an entity in a KPI column");
  add_target(place_cmd, true);
  auto* unplace_cmd = app.add_subcommand("unplace", "Remove an entity from a KPI column");
  add_target(unplace_cmd, false);
  auto* move_cmd = app.add_subcommand("move", "Move an entity to another cell");
  add_target(move_cmd, true);

  std::string format = "md";
  auto* report_cmd = app.add_subcommand("report", "Print the differentiation report");
  report_cmd->add_option("path", path, "Grid file")->required();
  report_cmd->add_option("--format", format, "md | csv | json | grid-csv")
      ->check(CLI::IsMember({"md", "csv", "json", "grid-csv"}));

  std::string op_text;
  std::string whatif_format = "text";
  auto* whatif_cmd = app.add_subcommand("whatif", "Show report changes for a mutation without saving");
  whatif_cmd->add_option("path", margs.path, "Grid file")->required();
  whatif_cmd->add_option("--op", op_text, "place | unplace | move")
      ->required()
      ->check(CLI::IsMember({"place", "unplace", "move"}));
  whatif_cmd->add_option("--kpi", margs.kpi, "KPI id")->required();
  whatif_cmd->add_option("--entity", margs.entity, "Entity id")->required();
  whatif_cmd->add_option("--band", margs.band, "Target band");
  whatif_cmd->add_option("--row", margs.row, "Target row");
  whatif_cmd->add_option("--format", whatif_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string ui_dir;
  std::string snapshot_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port, 0 picks a free one")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--ui-dir", ui_dir, "Static UI assets served under /");
  serve_cmd->add_option("--snapshot-dir", snapshot_dir, "Write every session here on shutdown");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*init) {
      if (std::filesystem::exists(path) && !force) {
        throw DomainError(path + " already exists (use --force to overwrite)");
      }
      auto kpis = kpis_source == "default" ? default_kpis() : read_kpis(kpis_source);
      auto entities = entities_file.empty() ? case_study_entities() : read_entities(entities_file);
      auto grid = new_grid(std::move(kpis), std::move(entities), parse_bands(bands_text));
      write_file(path, save_grid(grid));
      out << "wrote " << path << " (" << grid.kpis().size() << " KPIs, "
          << grid.entities().size() << " entities)\n";
      return kExitOk;
    }
    if (*validate_cmd) {
      auto grid = load_grid(read_file(path));
      out << "ok: " << grid.kpis().size() << " KPIs, " << grid.entities().size()
          << " entities, " << grid.placements().size() << " placements, revision "
          << grid.revision() << "\n";
      return kExitOk;
    }
    if (*place_cmd) return cmd_edit(MutationOp::Place, margs, out);
    if (*unplace_cmd) return cmd_edit(MutationOp::Unplace, margs, out);
    if (*move_cmd) return cmd_edit(MutationOp::Move, margs, out);
    if (*report_cmd) {
      auto grid = load_grid(read_file(path));
      auto report = assess(grid, chunk_limit_from_env());
      if (format == "md") out << export_report_markdown(report, grid);
      else if (format == "csv") out << export_report_csv(report, grid);
      else if (format == "grid-csv") out << export_grid_csv(grid);
      else out << report_to_json(report).dump(2) << "\n";
      return kExitOk;
    }
    if (*whatif_cmd) {
      return cmd_whatif(*parse_mutation_op(op_text), margs, whatif_format, out);
    }
    if (*serve_cmd) return cmd_serve(host, port, ui_dir, snapshot_dir, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LoadError& e) {
    err << "error: " << e.what() << "\n";
    print_violations(err, e.violations());
    return kExitDomain;
  } catch (const GridError& e) {
    // A single violation already carries the message; only summarize lists.
    if (e.violations().size() != 1) err << "error: " << e.what() << "\n";
    print_violations(err, e.violations());
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace tgrid::cli
