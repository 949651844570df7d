#pragma once

// T-algorithm rules over an InvestmentGrid: per-KPI strategy class, subject
// competence, the 3x3 investment guidance table, and what-if comparison.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tgrid/grid.hpp"

namespace tgrid {

enum class StrategyClass : std::uint8_t { TableStakes, Differentiator, NotApplicable };
enum class CompetenceLevel : std::uint8_t { Advanced, Intermediate, Novice, Unplaced };
enum class Action : std::uint8_t { Increase, Maintain, Decrease, NoGuidance };

inline constexpr StrategyClass kAllStrategies[] = {
    StrategyClass::TableStakes, StrategyClass::Differentiator, StrategyClass::NotApplicable};
inline constexpr CompetenceLevel kAllCompetences[] = {
    CompetenceLevel::Advanced, CompetenceLevel::Intermediate, CompetenceLevel::Novice,
    CompetenceLevel::Unplaced};

// Enum names as used on the wire: "TableStakes", "Unplaced", "NoGuidance".
std::string_view to_string(StrategyClass s);
std::string_view to_string(CompetenceLevel c);
std::string_view to_string(Action a);

/// "Table Stakes" / "Differentiator" / "Not Applicable".
std::string_view strategy_label(StrategyClass s);
/// Row-group label for the three placed levels, empty for Unplaced.
std::string_view competence_label(CompetenceLevel c);

struct BandCounts {
  std::string kpi_id;
  std::uint32_t advanced_count = 0;
  std::uint32_t novice_count = 0;

  bool operator==(const BandCounts&) const = default;
};

struct Recommendation {
  Action action = Action::NoGuidance;
  std::string guidance;

  bool operator==(const Recommendation&) const = default;
};

struct KpiAssessment {
  std::string kpi_id;
  BandCounts counts;
  StrategyClass strategy = StrategyClass::NotApplicable;
  CompetenceLevel competence = CompetenceLevel::Unplaced;
  Recommendation recommendation;
  bool highlight = false;  // blind spot: the market differentiates here, the subject is weak

  bool operator==(const KpiAssessment&) const = default;
};

enum class ChunkLintCode : std::uint8_t { CHUNK_KPIS, CHUNK_ENTITIES };
std::string_view to_string(ChunkLintCode code);

inline constexpr std::uint32_t kDefaultChunkLimit = 7;

struct ChunkLintWarning {
  ChunkLintCode code;
  std::uint32_t observed = 0;
  std::uint32_t limit = kDefaultChunkLimit;

  bool operator==(const ChunkLintWarning&) const = default;
};

struct DifferentiationReport {
  std::uint64_t grid_revision = 0;
  std::vector<KpiAssessment> assessments;  // KPI position order
  std::vector<ChunkLintWarning> warnings;

  bool operator==(const DifferentiationReport&) const = default;
};

struct Delta {
  std::string kpi_id;
  std::string field;  // advanced_count, novice_count, strategy, competence, action, guidance, highlight
  std::string old_value;
  std::string new_value;

  bool operator==(const Delta&) const = default;
};

struct WhatIfResult {
  DifferentiationReport before;
  DifferentiationReport after;
  std::vector<Delta> deltas;
};

/// Sizes of the whole Advanced and Novice bands. The subject counts like any
/// other entity; the Intermediate band enters neither count.
BandCounts band_counts(const InvestmentGrid& grid, std::string_view kpi_id);

/// TableStakes if advanced > novice, else NotApplicable if advanced == 0,
/// else Differentiator. The branch order matters: (0, n) is NotApplicable.
StrategyClass classify_strategy(const BandCounts& counts);

/// Band of the subject's placement in this column, Unplaced if it has none.
CompetenceLevel classify_competence(const InvestmentGrid& grid, std::string_view kpi_id);

/// Investment guidance cell. Unplaced is looked up as Novice; the empty
/// Advanced x NotApplicable cell yields {NoGuidance, ""}.
Recommendation recommend(CompetenceLevel competence, StrategyClass strategy);

bool is_blind_spot(CompetenceLevel competence, StrategyClass strategy);

/// Throws GridError if the grid does not validate.
DifferentiationReport assess(const InvestmentGrid& grid,
                             std::uint32_t chunk_limit = kDefaultChunkLimit);

/// Throws std::invalid_argument for limit < 1.
std::vector<ChunkLintWarning> chunk_lint(const InvestmentGrid& grid,
                                         std::uint32_t limit = kDefaultChunkLimit);

/// Field-wise per-KPI differences in KPI order. Revision and warnings are not
/// compared. Throws std::invalid_argument if the KPI lists differ.
std::vector<Delta> diff_reports(const DifferentiationReport& before,
                                const DifferentiationReport& after);

/// Assesses `grid` before and after `mutation` without touching `grid`.
/// Mutation errors propagate unchanged.
WhatIfResult what_if(const InvestmentGrid& grid, const Mutation& mutation,
                     std::uint32_t chunk_limit = kDefaultChunkLimit);

}  // namespace tgrid
