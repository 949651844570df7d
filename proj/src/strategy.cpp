#include "tgrid/strategy.hpp"

#include <stdexcept>

namespace tgrid {

std::string_view to_string(StrategyClass s) {
  switch (s) {
    case StrategyClass::TableStakes: return "TableStakes";
    case StrategyClass::Differentiator: return "Differentiator";
    case StrategyClass::NotApplicable: return "NotApplicable";
  }
  return "?";
}

std::string_view to_string(CompetenceLevel c) {
  switch (c) {
    case CompetenceLevel::Advanced: return "Advanced";
    case CompetenceLevel::Intermediate: return "Intermediate";
    case CompetenceLevel::Novice: return "Novice";
    case CompetenceLevel::Unplaced: return "Unplaced";
  }
  return "?";
}

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Increase: return "Increase";
    case Action::Maintain: return "Maintain";
    case Action::Decrease: return "Decrease";
    case Action::NoGuidance: return "NoGuidance";
  }
  return "?";
}

std::string_view to_string(ChunkLintCode code) {
  switch (code) {
    case ChunkLintCode::CHUNK_KPIS: return "CHUNK_KPIS";
    case ChunkLintCode::CHUNK_ENTITIES: return "CHUNK_ENTITIES";
  }
  return "?";
}

std::string_view strategy_label(StrategyClass s) {
  switch (s) {
    case StrategyClass::TableStakes: return "Table Stakes";
    case StrategyClass::Differentiator: return "Differentiator";
    case StrategyClass::NotApplicable: return "Not Applicable";
  }
  return "?";
}

std::string_view competence_label(CompetenceLevel c) {
  switch (c) {
    case CompetenceLevel::Advanced: return band_label(CompetenceBand::Advanced);
    case CompetenceLevel::Intermediate: return band_label(CompetenceBand::Intermediate);
    case CompetenceLevel::Novice: return band_label(CompetenceBand::Novice);
    case CompetenceLevel::Unplaced: return "";
  }
  return "";
}

BandCounts band_counts(const InvestmentGrid& grid, std::string_view kpi_id) {
  BandCounts counts;
  counts.kpi_id = std::string(kpi_id);
  counts.advanced_count =
      static_cast<std::uint32_t>(band_members(grid, kpi_id, CompetenceBand::Advanced).size());
  counts.novice_count =
      static_cast<std::uint32_t>(band_members(grid, kpi_id, CompetenceBand::Novice).size());
  return counts;
}

StrategyClass classify_strategy(const BandCounts& counts) {
  if (counts.advanced_count > counts.novice_count) return StrategyClass::TableStakes;
  if (counts.advanced_count == 0) return StrategyClass::NotApplicable;
  return StrategyClass::Differentiator;
}

CompetenceLevel classify_competence(const InvestmentGrid& grid, std::string_view kpi_id) {
  if (grid.find_kpi(kpi_id) == nullptr) {
    throw GridError(Violation{ViolationCode::UNKNOWN_REF,
                              "unknown kpi '" + std::string(kpi_id) + "'", std::string(kpi_id),
                              std::nullopt});
  }
  const Entity* subject = grid.subject();
  if (subject == nullptr) {
    throw GridError(Violation{ViolationCode::NO_SUBJECT, "no entity is marked as subject",
                              std::nullopt, std::nullopt});
  }
  auto placement = grid.placement_of(kpi_id, subject->id);
  if (!placement) return CompetenceLevel::Unplaced;
  switch (placement->band) {
    case CompetenceBand::Advanced: return CompetenceLevel::Advanced;
    case CompetenceBand::Intermediate: return CompetenceLevel::Intermediate;
    case CompetenceBand::Novice: return CompetenceLevel::Novice;
  }
  return CompetenceLevel::Unplaced;
}

Recommendation recommend(CompetenceLevel competence, StrategyClass strategy) {
  if (competence == CompetenceLevel::Unplaced) competence = CompetenceLevel::Novice;

  switch (competence) {
    case CompetenceLevel::Advanced:
      switch (strategy) {
        case StrategyClass::NotApplicable: return {Action::NoGuidance, ""};
        case StrategyClass::Differentiator:
          return {Action::Maintain,
                  "Maintain investment as you've identified a way to differentiate from "
                  "competitors. Continue to monitor ROI"};
        case StrategyClass::TableStakes:
          return {Action::Maintain,
                  "Maintain investment. Don't stop innovating or accelerating here as "
                  "competitors will continue to invest."};
      }
      break;
    case CompetenceLevel::Intermediate:
      switch (strategy) {
        case StrategyClass::NotApplicable:
          return {Action::Decrease,
                  "Decrease investment unless you think this is truly a differentiator"};
        case StrategyClass::Differentiator:
          return {Action::Maintain,
                  "Maintain investment as you're investing in a potential differentiator. "
                  "Continue to test & learn and decide to accelerate/decelerate."};
        case StrategyClass::TableStakes:
          return {Action::Maintain,
                  "Maintain investment, and increase investment if resources allow"};
      }
      break;
    case CompetenceLevel::Novice:
    case CompetenceLevel::Unplaced:
      switch (strategy) {
        case StrategyClass::NotApplicable:
          return {Action::Maintain,
                  "Maintain investment, don't invest in pillars that aren't applicable to your "
                  "company"};
        case StrategyClass::Differentiator:
          return {Action::Increase,
                  "Increase investment if all table stake strategies are a core competence or "
                  "you have no differentiators."};
        case StrategyClass::TableStakes:
          return {Action::Increase,
                  "Increase investment. Put this strategy on your roadmap and implement "
                  "immediate next steps to start making progress."};
      }
      break;
  }
  return {Action::NoGuidance, ""};
}

bool is_blind_spot(CompetenceLevel competence, StrategyClass strategy) {
  return strategy == StrategyClass::Differentiator &&
         (competence == CompetenceLevel::Novice || competence == CompetenceLevel::Unplaced);
}

DifferentiationReport assess(const InvestmentGrid& grid, std::uint32_t chunk_limit) {
  auto violations = validate(grid);
  if (!violations.empty()) throw GridError(std::move(violations));

  DifferentiationReport report;
  report.grid_revision = grid.revision();
  report.assessments.reserve(grid.kpis().size());
  for (const auto& kpi : grid.kpis()) {
    KpiAssessment a;
    a.kpi_id = kpi.id;
    a.counts = band_counts(grid, kpi.id);
    a.strategy = classify_strategy(a.counts);
    a.competence = classify_competence(grid, kpi.id);
    a.recommendation = recommend(a.competence, a.strategy);
    a.highlight = is_blind_spot(a.competence, a.strategy);
    report.assessments.push_back(std::move(a));
  }
  report.warnings = chunk_lint(grid, chunk_limit);
  return report;
}

std::vector<ChunkLintWarning> chunk_lint(const InvestmentGrid& grid, std::uint32_t limit) {
  if (limit < 1) throw std::invalid_argument("chunk limit must be at least 1");
  std::vector<ChunkLintWarning> out;
  auto kpis = static_cast<std::uint32_t>(grid.kpis().size());
  auto entities = static_cast<std::uint32_t>(grid.entities().size());
  if (kpis > limit) out.push_back({ChunkLintCode::CHUNK_KPIS, kpis, limit});
  if (entities > limit) out.push_back({ChunkLintCode::CHUNK_ENTITIES, entities, limit});
  return out;
}

std::vector<Delta> diff_reports(const DifferentiationReport& before,
                                const DifferentiationReport& after) {
  if (before.assessments.size() != after.assessments.size()) {
    throw std::invalid_argument("reports cover different KPI sets");
  }
  for (std::size_t i = 0; i < before.assessments.size(); ++i) {
    if (before.assessments[i].kpi_id != after.assessments[i].kpi_id) {
      throw std::invalid_argument("reports cover different KPI sets");
    }
  }

  std::vector<Delta> deltas;
  for (std::size_t i = 0; i < before.assessments.size(); ++i) {
    const auto& b = before.assessments[i];
    const auto& a = after.assessments[i];
    auto add = [&](std::string_view field, std::string old_value, std::string new_value) {
      if (old_value != new_value) {
        deltas.push_back({b.kpi_id, std::string(field), std::move(old_value), std::move(new_value)});
      }
    };
    add("advanced_count", std::to_string(b.counts.advanced_count),
        std::to_string(a.counts.advanced_count));
    add("novice_count", std::to_string(b.counts.novice_count),
        std::to_string(a.counts.novice_count));
    add("strategy", std::string(to_string(b.strategy)), std::string(to_string(a.strategy)));
    add("competence", std::string(to_string(b.competence)), std::string(to_string(a.competence)));
    add("action", std::string(to_string(b.recommendation.action)),
        std::string(to_string(a.recommendation.action)));
    add("guidance", b.recommendation.guidance, a.recommendation.guidance);
    add("highlight", b.highlight ? "true" : "false", a.highlight ? "true" : "false");
  }
  return deltas;
}

WhatIfResult what_if(const InvestmentGrid& grid, const Mutation& mutation,
                     std::uint32_t chunk_limit) {
  auto mutated = apply(grid, mutation);
  WhatIfResult result;
  result.before = assess(grid, chunk_limit);
  result.after = assess(mutated, chunk_limit);
  result.deltas = diff_reports(result.before, result.after);
  return result;
}

}  // namespace tgrid
