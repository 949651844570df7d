#pragma once

// Ordinal investment grid: KPIs as columns, competitors placed into three
// competence bands per column. Grid values are immutable; every mutation
// returns a new value with the revision bumped.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tgrid {

/// True when `s` is a non-empty `[a-z0-9-]+` identifier.
bool is_slug(std::string_view s);

/// Lowercases `name` and collapses every run of non-alphanumerics to a single
/// '-'. Leading and trailing dashes are dropped. "Harbour.Space" -> "harbour-space".
std::string slugify(std::string_view name);

struct Kpi {
  std::string id;
  std::string name;
  std::string description;

  bool operator==(const Kpi&) const = default;
};

struct Entity {
  std::string id;
  std::string name;
  bool subject = false;

  bool operator==(const Entity&) const = default;
};

enum class CompetenceBand : std::uint8_t { Advanced, Intermediate, Novice };

inline constexpr CompetenceBand kAllBands[] = {
    CompetenceBand::Advanced, CompetenceBand::Intermediate, CompetenceBand::Novice};

/// "advanced" / "intermediate" / "novice".
std::string_view to_string(CompetenceBand band);
/// Case-insensitive inverse of to_string.
std::optional<CompetenceBand> parse_band(std::string_view text);
/// Row-group label as printed on the investment grid.
std::string_view band_label(CompetenceBand band);

struct BandSpec {
  std::uint32_t advanced_capacity = 6;
  std::uint32_t intermediate_capacity = 2;
  std::uint32_t novice_capacity = 3;

  std::uint32_t capacity(CompetenceBand band) const;
  std::uint32_t total() const {
    return advanced_capacity + intermediate_capacity + novice_capacity;
  }
  bool operator==(const BandSpec&) const = default;
};

struct Placement {
  std::string kpi_id;
  std::string entity_id;
  CompetenceBand band = CompetenceBand::Advanced;
  std::uint32_t row = 0;  // 0 is the highest rank within the band

  bool operator==(const Placement&) const = default;
};

enum class ViolationCode : std::uint8_t {
  DUP_ENTITY,
  DUP_CELL,
  ROW_OVERFLOW,
  UNKNOWN_REF,
  NO_SUBJECT,
  MULTI_SUBJECT,
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;
  std::optional<std::string> kpi_id;
  std::optional<std::string> entity_id;

  bool operator==(const Violation&) const = default;
};

/// Raised by grid construction and mutations; carries the offending violations.
class GridError : public std::runtime_error {
 public:
  explicit GridError(std::vector<Violation> violations);
  explicit GridError(Violation violation);

  const std::vector<Violation>& violations() const noexcept { return violations_; }
  ViolationCode code() const noexcept { return violations_.front().code; }

 private:
  std::vector<Violation> violations_;
};

class InvestmentGrid {
 public:
  /// Assembles a grid without checking cross-reference invariants, so that
  /// decoders can hand a possibly-corrupt grid to validate(). Still rejects
  /// malformed pieces (non-slug ids, zero capacities) with std::invalid_argument.
  /// Placements are kept in canonical order: KPI position, band, row.
  static InvestmentGrid from_parts(std::vector<Kpi> kpis, std::vector<Entity> entities,
                                   BandSpec bands, std::vector<Placement> placements,
                                   std::uint64_t revision);

  const std::vector<Kpi>& kpis() const noexcept { return kpis_; }
  const std::vector<Entity>& entities() const noexcept { return entities_; }
  const BandSpec& bands() const noexcept { return bands_; }
  const std::vector<Placement>& placements() const noexcept { return placements_; }
  std::uint64_t revision() const noexcept { return revision_; }

  const Kpi* find_kpi(std::string_view id) const;
  const Entity* find_entity(std::string_view id) const;
  std::optional<std::size_t> kpi_position(std::string_view id) const;
  /// First entity flagged as subject, if any.
  const Entity* subject() const;

  std::optional<Placement> placement_of(std::string_view kpi_id,
                                        std::string_view entity_id) const;
  /// Placements of one KPI column in band/row order.
  std::vector<Placement> column(std::string_view kpi_id) const;

  bool operator==(const InvestmentGrid&) const = default;

 private:
  InvestmentGrid() = default;

  std::vector<Kpi> kpis_;
  std::vector<Entity> entities_;
  BandSpec bands_;
  std::vector<Placement> placements_;
  std::uint64_t revision_ = 0;
};

/// Empty-placement grid at revision 0. Throws GridError on subject or id
/// problems and std::invalid_argument on malformed ids or capacities.
InvestmentGrid new_grid(std::vector<Kpi> kpis, std::vector<Entity> entities,
                        BandSpec bands = {});

InvestmentGrid place(const InvestmentGrid& grid, std::string_view kpi_id,
                     std::string_view entity_id, CompetenceBand band, std::uint32_t row);

/// Removes a placement. Remaining rows keep their positions.
InvestmentGrid unplace(const InvestmentGrid& grid, std::string_view kpi_id,
                       std::string_view entity_id);

InvestmentGrid move_placement(const InvestmentGrid& grid, std::string_view kpi_id,
                              std::string_view entity_id, CompetenceBand new_band,
                              std::uint32_t new_row);

/// Every broken invariant, ordered by KPI position then entity id. Grid-wide
/// problems (subject flags, duplicate ids) come first.
std::vector<Violation> validate(const InvestmentGrid& grid);

/// Entity ids of one band, ascending by row.
std::vector<std::string> band_members(const InvestmentGrid& grid, std::string_view kpi_id,
                                      CompetenceBand band);

// A single placement edit, addressed by ids. Used by what-if analysis and the
// HTTP and CLI front ends.
enum class MutationOp : std::uint8_t { Place, Unplace, Move };

std::string_view to_string(MutationOp op);
std::optional<MutationOp> parse_mutation_op(std::string_view text);

struct Mutation {
  MutationOp op = MutationOp::Place;
  std::string kpi_id;
  std::string entity_id;
  std::optional<CompetenceBand> band;  // required for place and move
  std::optional<std::uint32_t> row;    // required for place and move

  bool operator==(const Mutation&) const = default;
};

/// Dispatches to place/unplace/move_placement. Throws std::invalid_argument if
/// band or row is missing for an op that needs them.
InvestmentGrid apply(const InvestmentGrid& grid, const Mutation& mutation);

}  // namespace tgrid
