#pragma once

// Grid documents ("tgrid/1" JSON), report renderings, and the built-in
// catalog and case-study fixture.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tgrid/grid.hpp"
#include "tgrid/strategy.hpp"

namespace tgrid {

inline constexpr std::string_view kFormatTag = "tgrid/1";

enum class LoadErrorKind : std::uint8_t { PARSE, FORMAT, SCHEMA, INVALID };
std::string_view to_string(LoadErrorKind kind);

class LoadError : public std::runtime_error {
 public:
  LoadError(LoadErrorKind kind, const std::string& message,
            std::vector<Violation> violations = {});

  LoadErrorKind kind() const noexcept { return kind_; }
  /// Populated for INVALID.
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  LoadErrorKind kind_;
  std::vector<Violation> violations_;
};

/// Canonical document bytes. Key order is fixed, placements are sorted by
/// KPI position then band then row, two-space indent, trailing newline.
/// Throws GridError when the grid does not validate.
std::string save_grid(const InvestmentGrid& grid);

/// Strict decode: unknown keys are rejected at every level. Throws LoadError.
InvestmentGrid load_grid(std::string_view bytes);

/// Differentiation table as a markdown pipe table followed by warning and
/// blind-spot sections. Throws std::invalid_argument if the report does not
/// cover the grid's KPIs.
std::string export_report_markdown(const DifferentiationReport& report,
                                   const InvestmentGrid& grid);

/// One row per KPI with counts, labels and guidance.
std::string export_report_csv(const DifferentiationReport& report, const InvestmentGrid& grid);

/// The investment grid laid out like the paper table: KPI names across,
/// band rows down, the band label on each band's first row.
std::string export_grid_csv(const InvestmentGrid& grid);

nlohmann::ordered_json violation_to_json(const Violation& v);
nlohmann::ordered_json violations_to_json(const std::vector<Violation>& vs);
nlohmann::ordered_json warnings_to_json(const std::vector<ChunkLintWarning>& ws);
nlohmann::ordered_json report_to_json(const DifferentiationReport& report);
nlohmann::ordered_json what_if_to_json(const WhatIfResult& result);

/// The eight KPIs of the T-algorithm, in catalog order.
std::vector<Kpi> default_kpis();
/// Competitors from the university case study, "My New Uni" as subject.
std::vector<Entity> case_study_entities();
/// Transcription of the case-study investment grid (bands 4/4/6, revision 0).
InvestmentGrid load_fixture_paper();

}  // namespace tgrid
