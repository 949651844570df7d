#include "tgrid/grid.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <utility>

namespace tgrid {

bool is_slug(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
  });
}

std::string slugify(std::string_view name) {
  std::string out;
  bool pending_dash = false;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      if (pending_dash && !out.empty()) out.push_back('-');
      pending_dash = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_dash = true;
    }
  }
  return out;
}

std::string_view to_string(CompetenceBand band) {
  switch (band) {
    case CompetenceBand::Advanced: return "advanced";
    case CompetenceBand::Intermediate: return "intermediate";
    case CompetenceBand::Novice: return "novice";
  }
  return "?";
}

std::optional<CompetenceBand> parse_band(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto band : kAllBands) {
    if (lower == to_string(band)) return band;
  }
  return std::nullopt;
}

std::string_view band_label(CompetenceBand band) {
  switch (band) {
    case CompetenceBand::Advanced: return "Advanced Core Competence";
    case CompetenceBand::Intermediate: return "Intermediate, progress made, needs improvement";
    case CompetenceBand::Novice: return "Novice/Not on Radar";
  }
  return "?";
}

std::uint32_t BandSpec::capacity(CompetenceBand band) const {
  switch (band) {
    case CompetenceBand::Advanced: return advanced_capacity;
    case CompetenceBand::Intermediate: return intermediate_capacity;
    case CompetenceBand::Novice: return novice_capacity;
  }
  return 0;
}

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::DUP_ENTITY: return "DUP_ENTITY";
    case ViolationCode::DUP_CELL: return "DUP_CELL";
    case ViolationCode::ROW_OVERFLOW: return "ROW_OVERFLOW";
    case ViolationCode::UNKNOWN_REF: return "UNKNOWN_REF";
    case ViolationCode::NO_SUBJECT: return "NO_SUBJECT";
    case ViolationCode::MULTI_SUBJECT: return "MULTI_SUBJECT";
  }
  return "?";
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  if (violations.empty()) return "grid error";
  std::string out(to_string(violations.front().code));
  out += ": ";
  out += violations.front().message;
  if (violations.size() > 1) {
    out += " (+" + std::to_string(violations.size() - 1) + " more)";
  }
  return out;
}

Violation make_violation(ViolationCode code, std::string message,
                         std::optional<std::string> kpi = std::nullopt,
                         std::optional<std::string> entity = std::nullopt) {
  return Violation{code, std::move(message), std::move(kpi), std::move(entity)};
}

}  // namespace

GridError::GridError(std::vector<Violation> violations)
    : std::runtime_error(summarize(violations)), violations_(std::move(violations)) {
  if (violations_.empty()) throw std::logic_error("GridError without violations");
}

GridError::GridError(Violation violation)
    : GridError(std::vector<Violation>{std::move(violation)}) {}

InvestmentGrid InvestmentGrid::from_parts(std::vector<Kpi> kpis, std::vector<Entity> entities,
                                          BandSpec bands, std::vector<Placement> placements,
                                          std::uint64_t revision) {
  for (const auto& k : kpis) {
    if (!is_slug(k.id)) throw std::invalid_argument("kpi id '" + k.id + "' is not a slug");
  }
  for (const auto& e : entities) {
    if (!is_slug(e.id)) throw std::invalid_argument("entity id '" + e.id + "' is not a slug");
  }
  for (const auto& p : placements) {
    if (!is_slug(p.kpi_id) || !is_slug(p.entity_id)) {
      throw std::invalid_argument("placement references a non-slug id");
    }
  }
  if (bands.advanced_capacity < 1 || bands.intermediate_capacity < 1 ||
      bands.novice_capacity < 1) {
    throw std::invalid_argument("band capacities must be at least 1");
  }

  InvestmentGrid g;
  g.kpis_ = std::move(kpis);
  g.entities_ = std::move(entities);
  g.bands_ = bands;
  g.placements_ = std::move(placements);
  g.revision_ = revision;

  // Unknown KPIs sort after every known column.
  auto key = [&g](const Placement& p) {
    auto pos = g.kpi_position(p.kpi_id).value_or(std::numeric_limits<std::size_t>::max());
    return std::tuple<std::size_t, const std::string&, CompetenceBand, std::uint32_t,
                      const std::string&>(pos, p.kpi_id, p.band, p.row, p.entity_id);
  };
  std::stable_sort(g.placements_.begin(), g.placements_.end(),
                   [&key](const Placement& a, const Placement& b) { return key(a) < key(b); });
  return g;
}

const Kpi* InvestmentGrid::find_kpi(std::string_view id) const {
  auto it = std::find_if(kpis_.begin(), kpis_.end(), [id](const Kpi& k) { return k.id == id; });
  return it == kpis_.end() ? nullptr : &*it;
}

const Entity* InvestmentGrid::find_entity(std::string_view id) const {
  auto it = std::find_if(entities_.begin(), entities_.end(),
                         [id](const Entity& e) { return e.id == id; });
  return it == entities_.end() ? nullptr : &*it;
}

std::optional<std::size_t> InvestmentGrid::kpi_position(std::string_view id) const {
  for (std::size_t i = 0; i < kpis_.size(); ++i) {
    if (kpis_[i].id == id) return i;
  }
  return std::nullopt;
}

const Entity* InvestmentGrid::subject() const {
  auto it = std::find_if(entities_.begin(), entities_.end(),
                         [](const Entity& e) { return e.subject; });
  return it == entities_.end() ? nullptr : &*it;
}

std::optional<Placement> InvestmentGrid::placement_of(std::string_view kpi_id,
                                                      std::string_view entity_id) const {
  for (const auto& p : placements_) {
    if (p.kpi_id == kpi_id && p.entity_id == entity_id) return p;
  }
  return std::nullopt;
}

std::vector<Placement> InvestmentGrid::column(std::string_view kpi_id) const {
  std::vector<Placement> out;
  for (const auto& p : placements_) {
    if (p.kpi_id == kpi_id) out.push_back(p);
  }
  return out;
}

InvestmentGrid new_grid(std::vector<Kpi> kpis, std::vector<Entity> entities, BandSpec bands) {
  auto grid = InvestmentGrid::from_parts(std::move(kpis), std::move(entities), bands, {}, 0);
  auto violations = validate(grid);
  if (!violations.empty()) throw GridError(std::move(violations));
  return grid;
}

namespace {

void require_refs(const InvestmentGrid& grid, std::string_view kpi_id,
                  std::string_view entity_id) {
  if (grid.find_kpi(kpi_id) == nullptr) {
    throw GridError(make_violation(ViolationCode::UNKNOWN_REF,
                                   "unknown kpi '" + std::string(kpi_id) + "'",
                                   std::string(kpi_id), std::string(entity_id)));
  }
  if (grid.find_entity(entity_id) == nullptr) {
    throw GridError(make_violation(ViolationCode::UNKNOWN_REF,
                                   "unknown entity '" + std::string(entity_id) + "'",
                                   std::string(kpi_id), std::string(entity_id)));
  }
}

void require_row(const InvestmentGrid& grid, std::string_view kpi_id, std::string_view entity_id,
                 CompetenceBand band, std::uint32_t row) {
  if (row >= grid.bands().capacity(band)) {
    throw GridError(make_violation(
        ViolationCode::ROW_OVERFLOW,
        "row " + std::to_string(row) + " exceeds " + std::string(to_string(band)) +
            " capacity " + std::to_string(grid.bands().capacity(band)),
        std::string(kpi_id), std::string(entity_id)));
  }
}

void require_free_cell(const InvestmentGrid& grid, std::string_view kpi_id,
                       std::string_view entity_id, CompetenceBand band, std::uint32_t row) {
  for (const auto& p : grid.placements()) {
    if (p.kpi_id == kpi_id && p.band == band && p.row == row) {
      throw GridError(make_violation(
          ViolationCode::DUP_CELL,
          "cell (" + std::string(to_string(band)) + ", " + std::to_string(row) +
              ") is occupied by '" + p.entity_id + "'",
          std::string(kpi_id), std::string(entity_id)));
    }
  }
}

InvestmentGrid rebuilt(const InvestmentGrid& grid, std::vector<Placement> placements) {
  return InvestmentGrid::from_parts(grid.kpis(), grid.entities(), grid.bands(),
                                    std::move(placements), grid.revision() + 1);
}

std::vector<Placement> without(const InvestmentGrid& grid, std::string_view kpi_id,
                               std::string_view entity_id) {
  std::vector<Placement> rest;
  rest.reserve(grid.placements().size());
  for (const auto& p : grid.placements()) {
    if (!(p.kpi_id == kpi_id && p.entity_id == entity_id)) rest.push_back(p);
  }
  return rest;
}

void require_placed(const InvestmentGrid& grid, std::string_view kpi_id,
                    std::string_view entity_id) {
  require_refs(grid, kpi_id, entity_id);
  if (!grid.placement_of(kpi_id, entity_id)) {
    throw GridError(make_violation(ViolationCode::UNKNOWN_REF,
                                   "'" + std::string(entity_id) + "' is not placed in '" +
                                       std::string(kpi_id) + "'",
                                   std::string(kpi_id), std::string(entity_id)));
  }
}

}  // namespace

InvestmentGrid place(const InvestmentGrid& grid, std::string_view kpi_id,
                     std::string_view entity_id, CompetenceBand band, std::uint32_t row) {
  require_refs(grid, kpi_id, entity_id);
  require_row(grid, kpi_id, entity_id, band, row);
  if (grid.placement_of(kpi_id, entity_id)) {
    throw GridError(make_violation(ViolationCode::DUP_ENTITY,
                                   "'" + std::string(entity_id) + "' is already placed in '" +
                                       std::string(kpi_id) + "'",
                                   std::string(kpi_id), std::string(entity_id)));
  }
  require_free_cell(grid, kpi_id, entity_id, band, row);

  auto placements = grid.placements();
  placements.push_back(Placement{std::string(kpi_id), std::string(entity_id), band, row});
  return rebuilt(grid, std::move(placements));
}

InvestmentGrid unplace(const InvestmentGrid& grid, std::string_view kpi_id,
                       std::string_view entity_id) {
  require_placed(grid, kpi_id, entity_id);
  return rebuilt(grid, without(grid, kpi_id, entity_id));
}

InvestmentGrid move_placement(const InvestmentGrid& grid, std::string_view kpi_id,
                              std::string_view entity_id, CompetenceBand new_band,
                              std::uint32_t new_row) {
  require_placed(grid, kpi_id, entity_id);
  require_row(grid, kpi_id, entity_id, new_band, new_row);
  // Moving onto the entity's own cell counts as occupied.
  require_free_cell(grid, kpi_id, entity_id, new_band, new_row);

  auto placements = without(grid, kpi_id, entity_id);
  placements.push_back(Placement{std::string(kpi_id), std::string(entity_id), new_band, new_row});
  return rebuilt(grid, std::move(placements));
}

std::vector<Violation> validate(const InvestmentGrid& grid) {
  std::vector<Violation> global;

  auto subjects = std::count_if(grid.entities().begin(), grid.entities().end(),
                                [](const Entity& e) { return e.subject; });
  if (subjects == 0) {
    global.push_back(make_violation(ViolationCode::NO_SUBJECT, "no entity is marked as subject"));
  } else if (subjects > 1) {
    for (const auto& e : grid.entities()) {
      if (e.subject) {
        global.push_back(make_violation(ViolationCode::MULTI_SUBJECT,
                                        "'" + e.id + "' is one of " + std::to_string(subjects) +
                                            " subjects",
                                        std::nullopt, e.id));
      }
    }
  }

  std::set<std::string> seen;
  for (const auto& k : grid.kpis()) {
    if (!seen.insert(k.id).second) {
      global.push_back(make_violation(ViolationCode::DUP_ENTITY, "duplicate kpi id '" + k.id + "'",
                                      k.id, std::nullopt));
    }
  }
  seen.clear();
  for (const auto& e : grid.entities()) {
    if (!seen.insert(e.id).second) {
      global.push_back(make_violation(ViolationCode::DUP_ENTITY,
                                      "duplicate entity id '" + e.id + "'", std::nullopt, e.id));
    }
  }

  std::vector<Violation> local;
  std::map<std::pair<std::string, std::string>, int> per_entity;
  std::map<std::tuple<std::string, CompetenceBand, std::uint32_t>, std::vector<std::string>>
      per_cell;
  for (const auto& p : grid.placements()) {
    bool known = true;
    if (grid.find_kpi(p.kpi_id) == nullptr) {
      local.push_back(make_violation(ViolationCode::UNKNOWN_REF, "unknown kpi '" + p.kpi_id + "'",
                                     p.kpi_id, p.entity_id));
      known = false;
    }
    if (grid.find_entity(p.entity_id) == nullptr) {
      local.push_back(make_violation(ViolationCode::UNKNOWN_REF,
                                     "unknown entity '" + p.entity_id + "'", p.kpi_id,
                                     p.entity_id));
      known = false;
    }
    if (p.row >= grid.bands().capacity(p.band)) {
      local.push_back(make_violation(
          ViolationCode::ROW_OVERFLOW,
          "row " + std::to_string(p.row) + " exceeds " + std::string(to_string(p.band)) +
              " capacity " + std::to_string(grid.bands().capacity(p.band)),
          p.kpi_id, p.entity_id));
    }
    if (known && ++per_entity[{p.kpi_id, p.entity_id}] == 2) {
      local.push_back(make_violation(ViolationCode::DUP_ENTITY,
                                     "'" + p.entity_id + "' is placed more than once",
                                     p.kpi_id, p.entity_id));
    }
    per_cell[{p.kpi_id, p.band, p.row}].push_back(p.entity_id);
  }
  for (const auto& [cell, occupants] : per_cell) {
    if (occupants.size() < 2) continue;
    const auto& [kpi_id, band, row] = cell;
    for (const auto& entity : occupants) {
      local.push_back(make_violation(
          ViolationCode::DUP_CELL,
          "cell (" + std::string(to_string(band)) + ", " + std::to_string(row) + ") holds " +
              std::to_string(occupants.size()) + " entities",
          kpi_id, entity));
    }
  }

  auto order = [&grid](const Violation& v) {
    const auto& kpi = v.kpi_id.value_or("");
    auto pos = grid.kpi_position(kpi).value_or(std::numeric_limits<std::size_t>::max());
    return std::make_tuple(pos, kpi, v.entity_id.value_or(""), v.code, v.message);
  };
  std::stable_sort(local.begin(), local.end(),
                   [&order](const Violation& a, const Violation& b) { return order(a) < order(b); });

  global.insert(global.end(), std::make_move_iterator(local.begin()),
                std::make_move_iterator(local.end()));
  return global;
}

std::vector<std::string> band_members(const InvestmentGrid& grid, std::string_view kpi_id,
                                      CompetenceBand band) {
  if (grid.find_kpi(kpi_id) == nullptr) {
    throw GridError(make_violation(ViolationCode::UNKNOWN_REF,
                                   "unknown kpi '" + std::string(kpi_id) + "'",
                                   std::string(kpi_id)));
  }
  std::vector<std::string> out;
  for (const auto& p : grid.placements()) {
    // placements are already sorted by row within (kpi, band)
    if (p.kpi_id == kpi_id && p.band == band) out.push_back(p.entity_id);
  }
  return out;
}

std::string_view to_string(MutationOp op) {
  switch (op) {
    case MutationOp::Place: return "place";
    case MutationOp::Unplace: return "unplace";
    case MutationOp::Move: return "move";
  }
  return "?";
}

std::optional<MutationOp> parse_mutation_op(std::string_view text) {
  for (auto op : {MutationOp::Place, MutationOp::Unplace, MutationOp::Move}) {
    if (text == to_string(op)) return op;
  }
  return std::nullopt;
}

InvestmentGrid apply(const InvestmentGrid& grid, const Mutation& m) {
  if (m.op != MutationOp::Unplace && (!m.band || !m.row)) {
    throw std::invalid_argument(std::string(to_string(m.op)) + " requires band and row");
  }
  switch (m.op) {
    case MutationOp::Place: return place(grid, m.kpi_id, m.entity_id, *m.band, *m.row);
    case MutationOp::Unplace: return unplace(grid, m.kpi_id, m.entity_id);
    case MutationOp::Move: return move_placement(grid, m.kpi_id, m.entity_id, *m.band, *m.row);
  }
  throw std::invalid_argument("unknown mutation op");
}

}  // namespace tgrid
