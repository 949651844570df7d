#include "tgrid/persistence.hpp"

#include <limits>
#include <set>
#include <sstream>

namespace tgrid {

using nlohmann::ordered_json;

std::string_view to_string(LoadErrorKind kind) {
  switch (kind) {
    case LoadErrorKind::PARSE: return "PARSE";
    case LoadErrorKind::FORMAT: return "FORMAT";
    case LoadErrorKind::SCHEMA: return "SCHEMA";
    case LoadErrorKind::INVALID: return "INVALID";
  }
  return "?";
}

LoadError::LoadError(LoadErrorKind kind, const std::string& message,
                     std::vector<Violation> violations)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      violations_(std::move(violations)) {}

std::string save_grid(const InvestmentGrid& grid) {
  auto violations = validate(grid);
  if (!violations.empty()) throw GridError(std::move(violations));

  ordered_json doc;
  doc["format"] = kFormatTag;

  auto kpis = ordered_json::array();
  for (std::size_t i = 0; i < grid.kpis().size(); ++i) {
    const auto& k = grid.kpis()[i];
    kpis.push_back({{"id", k.id}, {"name", k.name}, {"description", k.description},
                    {"position", i}});
  }
  doc["kpis"] = std::move(kpis);

  auto entities = ordered_json::array();
  for (const auto& e : grid.entities()) {
    entities.push_back({{"id", e.id}, {"name", e.name}, {"subject", e.subject}});
  }
  doc["entities"] = std::move(entities);

  doc["bands"] = {{"advanced", grid.bands().advanced_capacity},
                  {"intermediate", grid.bands().intermediate_capacity},
                  {"novice", grid.bands().novice_capacity}};

  auto placements = ordered_json::array();
  for (const auto& p : grid.placements()) {
    placements.push_back({{"kpi", p.kpi_id}, {"entity", p.entity_id},
                          {"band", to_string(p.band)}, {"row", p.row}});
  }
  doc["placements"] = std::move(placements);
  doc["revision"] = grid.revision();

  return doc.dump(2) + "\n";
}

namespace {

[[noreturn]] void schema_error(const std::string& message) {
  throw LoadError(LoadErrorKind::SCHEMA, message);
}

const ordered_json& require_object(const ordered_json& j, const std::string& where,
                                   std::initializer_list<std::string_view> required,
                                   std::initializer_list<std::string_view> optional = {}) {
  if (!j.is_object()) schema_error(where + " must be an object");
  std::set<std::string_view> allowed(required);
  allowed.insert(optional.begin(), optional.end());
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) schema_error(where + " has unknown key '" + key + "'");
  }
  for (auto key : required) {
    if (!j.contains(key)) schema_error(where + " is missing '" + std::string(key) + "'");
  }
  return j;
}

std::string require_string(const ordered_json& j, std::string_view key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_string()) schema_error(where + "." + std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::string require_slug(const ordered_json& j, std::string_view key, const std::string& where) {
  auto s = require_string(j, key, where);
  if (!is_slug(s)) schema_error(where + "." + std::string(key) + " '" + s + "' is not a slug");
  return s;
}

std::uint64_t require_uint(const ordered_json& j, std::string_view key, const std::string& where,
                           std::uint64_t max = std::numeric_limits<std::uint64_t>::max()) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    schema_error(where + "." + std::string(key) + " must be a non-negative integer");
  }
  auto n = v.get<std::uint64_t>();
  if (n > max) schema_error(where + "." + std::string(key) + " is out of range");
  return n;
}

const ordered_json& require_array(const ordered_json& j, std::string_view key) {
  const auto& v = j.at(key);
  if (!v.is_array()) schema_error(std::string(key) + " must be an array");
  return v;
}

}  // namespace

InvestmentGrid load_grid(std::string_view bytes) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(bytes.begin(), bytes.end());
  } catch (const ordered_json::parse_error& e) {
    throw LoadError(LoadErrorKind::PARSE, e.what());
  }
  if (!doc.is_object() || !doc.contains("format")) {
    throw LoadError(LoadErrorKind::FORMAT, "missing format tag");
  }
  if (!doc["format"].is_string() || doc["format"].get<std::string>() != kFormatTag) {
    throw LoadError(LoadErrorKind::FORMAT,
                    "expected format \"" + std::string(kFormatTag) + "\", got " +
                        doc["format"].dump());
  }
  require_object(doc, "document",
                 {"format", "kpis", "entities", "bands", "placements", "revision"});

  constexpr auto kU32 = std::numeric_limits<std::uint32_t>::max();

  std::vector<Kpi> kpis;
  const auto& jkpis = require_array(doc, "kpis");
  for (std::size_t i = 0; i < jkpis.size(); ++i) {
    auto where = "kpis[" + std::to_string(i) + "]";
    const auto& jk = require_object(jkpis[i], where, {"id", "name", "position"}, {"description"});
    Kpi k;
    k.id = require_slug(jk, "id", where);
    k.name = require_string(jk, "name", where);
    if (jk.contains("description")) k.description = require_string(jk, "description", where);
    if (require_uint(jk, "position", where) != i) {
      schema_error(where + ".position must equal its index " + std::to_string(i));
    }
    kpis.push_back(std::move(k));
  }

  std::vector<Entity> entities;
  const auto& jentities = require_array(doc, "entities");
  for (std::size_t i = 0; i < jentities.size(); ++i) {
    auto where = "entities[" + std::to_string(i) + "]";
    const auto& je = require_object(jentities[i], where, {"id", "name", "subject"});
    Entity e;
    e.id = require_slug(je, "id", where);
    e.name = require_string(je, "name", where);
    if (!je.at("subject").is_boolean()) schema_error(where + ".subject must be a boolean");
    e.subject = je.at("subject").get<bool>();
    entities.push_back(std::move(e));
  }

  const auto& jb = require_object(doc.at("bands"), "bands", {"advanced", "intermediate", "novice"});
  BandSpec bands;
  bands.advanced_capacity = static_cast<std::uint32_t>(require_uint(jb, "advanced", "bands", kU32));
  bands.intermediate_capacity =
      static_cast<std::uint32_t>(require_uint(jb, "intermediate", "bands", kU32));
  bands.novice_capacity = static_cast<std::uint32_t>(require_uint(jb, "novice", "bands", kU32));
  if (bands.advanced_capacity < 1 || bands.intermediate_capacity < 1 ||
      bands.novice_capacity < 1) {
    schema_error("band capacities must be at least 1");
  }

  std::vector<Placement> placements;
  const auto& jplacements = require_array(doc, "placements");
  for (std::size_t i = 0; i < jplacements.size(); ++i) {
    auto where = "placements[" + std::to_string(i) + "]";
    const auto& jp = require_object(jplacements[i], where, {"kpi", "entity", "band", "row"});
    Placement p;
    p.kpi_id = require_slug(jp, "kpi", where);
    p.entity_id = require_slug(jp, "entity", where);
    auto band = parse_band(require_string(jp, "band", where));
    if (!band || require_string(jp, "band", where) != to_string(*band)) {
      schema_error(where + ".band must be advanced, intermediate or novice");
    }
    p.band = *band;
    p.row = static_cast<std::uint32_t>(require_uint(jp, "row", where, kU32));
    placements.push_back(std::move(p));
  }

  auto revision = require_uint(doc, "revision", "document");

  auto grid = InvestmentGrid::from_parts(std::move(kpis), std::move(entities), bands,
                                         std::move(placements), revision);
  auto violations = validate(grid);
  if (!violations.empty()) {
    std::string message = std::string(to_string(violations.front().code)) + ": " +
                          violations.front().message;
    throw LoadError(LoadErrorKind::INVALID, message, std::move(violations));
  }
  return grid;
}

namespace {

void require_matching_kpis(const DifferentiationReport& report, const InvestmentGrid& grid) {
  bool same = report.assessments.size() == grid.kpis().size();
  for (std::size_t i = 0; same && i < grid.kpis().size(); ++i) {
    same = report.assessments[i].kpi_id == grid.kpis()[i].id;
  }
  if (!same) throw std::invalid_argument("report does not match the grid's KPIs");
}

std::string md_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

std::string csv_cell(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_row(std::ostringstream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << csv_cell(cells[i]);
  }
  os << '\n';
}

std::string warning_text(const ChunkLintWarning& w) {
  std::string what = w.code == ChunkLintCode::CHUNK_KPIS ? "KPIs" : "entities";
  return std::string(to_string(w.code)) + ": " + std::to_string(w.observed) + " " + what +
         " exceed the chunk limit of " + std::to_string(w.limit);
}

}  // namespace

std::string export_report_markdown(const DifferentiationReport& report,
                                   const InvestmentGrid& grid) {
  require_matching_kpis(report, grid);
  const Entity* subject = grid.subject();
  std::string subject_name = subject ? subject->name : "Subject";

  std::ostringstream os;
  os << "# Differentiation grid\n\n";
  os << "| KPI | " << md_cell(subject_name)
     << " | Investment level | Recommendation | Blind spot |\n";
  os << "|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < report.assessments.size(); ++i) {
    const auto& a = report.assessments[i];
    const auto& kpi = grid.kpis()[i];
    os << "| " << (i + 1) << ". " << md_cell(kpi.name) << " | "
       << md_cell(competence_label(a.competence)) << " | " << strategy_label(a.strategy) << " | "
       << md_cell(a.recommendation.guidance) << " | " << (a.highlight ? "**yes**" : "") << " |\n";
  }
  os << "\nGrid revision: " << report.grid_revision << "\n";

  os << "\n## Warnings\n\n";
  if (report.warnings.empty()) os << "None.\n";
  for (const auto& w : report.warnings) os << "- " << warning_text(w) << "\n";

  os << "\n## Blind spots\n\n";
  bool any = false;
  for (std::size_t i = 0; i < report.assessments.size(); ++i) {
    const auto& a = report.assessments[i];
    if (!a.highlight) continue;
    any = true;
    os << "- " << md_cell(grid.kpis()[i].name) << ": " << strategy_label(a.strategy)
       << " while " << md_cell(subject_name) << " is "
       << (a.competence == CompetenceLevel::Unplaced ? std::string("not placed")
                                                     : std::string(competence_label(a.competence)))
       << "\n";
  }
  if (!any) os << "None.\n";
  return os.str();
}

std::string export_report_csv(const DifferentiationReport& report, const InvestmentGrid& grid) {
  require_matching_kpis(report, grid);
  std::ostringstream os;
  csv_row(os, {"position", "kpi_id", "kpi", "advanced_count", "novice_count", "competence",
               "strategy", "action", "guidance", "blind_spot"});
  for (std::size_t i = 0; i < report.assessments.size(); ++i) {
    const auto& a = report.assessments[i];
    csv_row(os, {std::to_string(i), a.kpi_id, grid.kpis()[i].name,
                 std::to_string(a.counts.advanced_count), std::to_string(a.counts.novice_count),
                 std::string(to_string(a.competence)), std::string(to_string(a.strategy)),
                 std::string(to_string(a.recommendation.action)), a.recommendation.guidance,
                 a.highlight ? "true" : "false"});
  }
  return os.str();
}

std::string export_grid_csv(const InvestmentGrid& grid) {
  std::ostringstream os;
  std::vector<std::string> header{""};
  for (const auto& k : grid.kpis()) header.push_back(k.name);
  csv_row(os, header);

  for (auto band : kAllBands) {
    for (std::uint32_t row = 0; row < grid.bands().capacity(band); ++row) {
      std::vector<std::string> cells{row == 0 ? std::string(band_label(band)) : std::string()};
      for (const auto& k : grid.kpis()) {
        std::string name;
        for (const auto& p : grid.placements()) {
          if (p.kpi_id == k.id && p.band == band && p.row == row) {
            const Entity* e = grid.find_entity(p.entity_id);
            name = e ? e->name : p.entity_id;
            break;
          }
        }
        cells.push_back(std::move(name));
      }
      csv_row(os, cells);
    }
  }
  return os.str();
}

ordered_json violation_to_json(const Violation& v) {
  ordered_json j{{"code", to_string(v.code)}, {"message", v.message}};
  j["kpi"] = v.kpi_id ? ordered_json(*v.kpi_id) : ordered_json(nullptr);
  j["entity"] = v.entity_id ? ordered_json(*v.entity_id) : ordered_json(nullptr);
  return j;
}

ordered_json violations_to_json(const std::vector<Violation>& vs) {
  auto out = ordered_json::array();
  for (const auto& v : vs) out.push_back(violation_to_json(v));
  return out;
}

ordered_json warnings_to_json(const std::vector<ChunkLintWarning>& ws) {
  auto out = ordered_json::array();
  for (const auto& w : ws) {
    out.push_back({{"code", to_string(w.code)}, {"observed", w.observed}, {"limit", w.limit}});
  }
  return out;
}

ordered_json report_to_json(const DifferentiationReport& report) {
  ordered_json j;
  j["grid_revision"] = report.grid_revision;
  auto rows = ordered_json::array();
  for (const auto& a : report.assessments) {
    rows.push_back({{"kpi_id", a.kpi_id},
                    {"advanced_count", a.counts.advanced_count},
                    {"novice_count", a.counts.novice_count},
                    {"strategy", to_string(a.strategy)},
                    {"strategy_label", strategy_label(a.strategy)},
                    {"competence", to_string(a.competence)},
                    {"competence_label", competence_label(a.competence)},
                    {"action", to_string(a.recommendation.action)},
                    {"guidance", a.recommendation.guidance},
                    {"highlight", a.highlight}});
  }
  j["assessments"] = std::move(rows);
  j["warnings"] = warnings_to_json(report.warnings);
  return j;
}

ordered_json what_if_to_json(const WhatIfResult& result) {
  ordered_json j;
  j["before"] = report_to_json(result.before);
  j["after"] = report_to_json(result.after);
  auto deltas = ordered_json::array();
  for (const auto& d : result.deltas) {
    deltas.push_back(
        {{"kpi_id", d.kpi_id}, {"field", d.field}, {"old", d.old_value}, {"new", d.new_value}});
  }
  j["deltas"] = std::move(deltas);
  return j;
}

}  // namespace tgrid
