#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support/formula_oracle.hpp"
#include "support/random_grid.hpp"
#include "tgrid/persistence.hpp"
#include "tgrid/strategy.hpp"

using namespace tgrid;

namespace {

InvestmentGrid column_grid() {
  return new_grid({{"k", "K", ""}, {"j", "J", ""}},
                  {{"a", "A", false}, {"b", "B", false}, {"c", "C", false}, {"me", "Me", true}},
                  {3, 3, 3});
}

BandCounts counts(std::uint32_t a, std::uint32_t n) { return BandCounts{"k", a, n}; }

}  // namespace

TEST_CASE("band_counts") {
  auto fixture = load_fixture_paper();
  auto vi = band_counts(fixture, "vertical-integration");
  CHECK(vi.advanced_count == 3);
  CHECK(vi.novice_count == 3);

  auto g = column_grid();
  CHECK(band_counts(g, "k") == counts(0, 0));

  auto middle = place(place(g, "k", "a", CompetenceBand::Intermediate, 0), "k", "me",
                      CompetenceBand::Intermediate, 2);
  CHECK(band_counts(middle, "k") == counts(0, 0));

  auto with_subject = place(g, "k", "me", CompetenceBand::Advanced, 1);
  CHECK(band_counts(with_subject, "k") == counts(1, 0));

  CHECK_THROWS_AS(band_counts(g, "zz"), GridError);
}

TEST_CASE("classify_strategy follows the formula branch order") {
  CHECK(classify_strategy(counts(4, 2)) == StrategyClass::TableStakes);
  CHECK(classify_strategy(counts(0, 0)) == StrategyClass::NotApplicable);
  CHECK(classify_strategy(counts(0, 3)) == StrategyClass::NotApplicable);
  CHECK(classify_strategy(counts(3, 3)) == StrategyClass::Differentiator);
  CHECK(classify_strategy(counts(1, 0)) == StrategyClass::TableStakes);
  CHECK(classify_strategy(counts(1, 6)) == StrategyClass::Differentiator);
}

TEST_CASE("classify_strategy agrees with the spreadsheet formula on [0..10]^2") {
  for (std::uint32_t a = 0; a <= 10; ++a) {
    for (std::uint32_t n = 0; n <= 10; ++n) {
      CAPTURE(a);
      CAPTURE(n);
      auto engine = classify_strategy(counts(a, n));
      CHECK(engine == oracle::oracle_strategy_for_counts(a, n));
      CHECK((engine == StrategyClass::NotApplicable) == (a == 0));
      CHECK((engine == StrategyClass::TableStakes) == (a > n));
      CHECK((engine == StrategyClass::Differentiator) == (0 < a && a <= n));
    }
  }
}

TEST_CASE("classify_competence") {
  auto fixture = load_fixture_paper();
  CHECK(classify_competence(fixture, "vertical-integration") == CompetenceLevel::Advanced);
  CHECK(classify_competence(fixture, "likeability") == CompetenceLevel::Intermediate);
  CHECK(classify_competence(fixture, "career-accelerant") == CompetenceLevel::Novice);

  auto g = column_grid();
  CHECK(classify_competence(g, "k") == CompetenceLevel::Unplaced);
  CHECK(classify_competence(place(g, "k", "a", CompetenceBand::Advanced, 0), "k") ==
        CompetenceLevel::Unplaced);
  CHECK_THROWS_AS(classify_competence(g, "zz"), GridError);
}

TEST_CASE("recommend returns the guidance table cells") {
  auto r = recommend(CompetenceLevel::Advanced, StrategyClass::Differentiator);
  CHECK(r.action == Action::Maintain);
  CHECK(r.guidance ==
        "Maintain investment as you've identified a way to differentiate from competitors. "
        "Continue to monitor ROI");

  r = recommend(CompetenceLevel::Novice, StrategyClass::TableStakes);
  CHECK(r.action == Action::Increase);
  CHECK(r.guidance ==
        "Increase investment. Put this strategy on your roadmap and implement immediate next "
        "steps to start making progress.");

  r = recommend(CompetenceLevel::Intermediate, StrategyClass::NotApplicable);
  CHECK(r.action == Action::Decrease);
  CHECK(r.guidance == "Decrease investment unless you think this is truly a differentiator");

  r = recommend(CompetenceLevel::Advanced, StrategyClass::NotApplicable);
  CHECK(r.action == Action::NoGuidance);
  CHECK(r.guidance.empty());

  SUBCASE("unplaced is looked up as novice") {
    for (auto s : kAllStrategies) {
      CHECK(recommend(CompetenceLevel::Unplaced, s) == recommend(CompetenceLevel::Novice, s));
    }
  }
  SUBCASE("total, and only one blank cell") {
    int blank = 0;
    for (auto c : kAllCompetences) {
      for (auto s : kAllStrategies) {
        auto cell = recommend(c, s);
        if (cell.action == Action::NoGuidance) {
          ++blank;
          CHECK(cell.guidance.empty());
        } else {
          CHECK_FALSE(cell.guidance.empty());
        }
      }
    }
    CHECK(blank == 1);
  }
}

TEST_CASE("assess") {
  SUBCASE("paper fixture") {
    auto report = assess(load_fixture_paper());
    REQUIRE(report.assessments.size() == 8);
    const auto& vi = report.assessments[4];
    CHECK(vi.kpi_id == "vertical-integration");
    CHECK(vi.strategy == StrategyClass::Differentiator);
    CHECK(vi.competence == CompetenceLevel::Advanced);
    CHECK(vi.recommendation == recommend(CompetenceLevel::Advanced, StrategyClass::Differentiator));
    CHECK_FALSE(vi.highlight);
    const auto& career = report.assessments[1];
    CHECK(career.strategy == StrategyClass::Differentiator);
    CHECK(career.competence == CompetenceLevel::Novice);
    CHECK(career.highlight);
  }
  SUBCASE("empty grid") {
    auto g = new_grid(default_kpis(), case_study_entities());
    auto report = assess(g);
    REQUIRE(report.assessments.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(report.assessments[i].kpi_id == g.kpis()[i].id);
      CHECK(report.assessments[i].strategy == StrategyClass::NotApplicable);
      CHECK(report.assessments[i].competence == CompetenceLevel::Unplaced);
      CHECK_FALSE(report.assessments[i].highlight);
    }
    REQUIRE(report.warnings.size() == 2);
    CHECK(report.warnings[0] == ChunkLintWarning{ChunkLintCode::CHUNK_KPIS, 8, 7});
  }
  SUBCASE("revision is copied") {
    auto g = place(column_grid(), "k", "me", CompetenceBand::Advanced, 0);
    CHECK(assess(g).grid_revision == 1);
  }
  SUBCASE("invalid grid is rejected") {
    auto bad = InvestmentGrid::from_parts({{"k", "K", ""}}, {{"a", "A", false}}, {1, 1, 1}, {}, 0);
    CHECK_THROWS_AS(assess(bad), GridError);
  }
  SUBCASE("deterministic") {
    auto g = load_fixture_paper();
    CHECK(assess(g) == assess(load_fixture_paper()));
  }
}

TEST_CASE("chunk_lint") {
  auto eight = new_grid(default_kpis(), case_study_entities());
  auto w = chunk_lint(eight);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == ChunkLintWarning{ChunkLintCode::CHUNK_KPIS, 8, 7});
  CHECK(w[1] == ChunkLintWarning{ChunkLintCode::CHUNK_ENTITIES, 8, 7});

  auto kpis = default_kpis();
  kpis.pop_back();
  auto entities = case_study_entities();
  entities.erase(entities.begin());
  CHECK(chunk_lint(new_grid(kpis, entities)).empty());

  CHECK(chunk_lint(eight, 8).empty());
  CHECK_THROWS_AS(chunk_lint(eight, 0), std::invalid_argument);
}

TEST_CASE("what_if") {
  auto g = place(column_grid(), "k", "me", CompetenceBand::Novice, 0);

  auto result = what_if(g, Mutation{MutationOp::Move, "k", "me", CompetenceBand::Advanced, 0});
  CHECK(g.revision() == 1);
  CHECK(result.before == assess(g));
  CHECK(result.after.grid_revision == 2);
  std::vector<Delta> expected{
      {"k", "advanced_count", "0", "1"},
      {"k", "novice_count", "1", "0"},
      {"k", "strategy", "NotApplicable", "TableStakes"},
      {"k", "competence", "Novice", "Advanced"},
      {"k", "guidance",
       "Maintain investment, don't invest in pillars that aren't applicable to your company",
       "Maintain investment. Don't stop innovating or accelerating here as competitors will "
       "continue to invest."},
  };
  CHECK(result.deltas == expected);

  CHECK_THROWS_AS(what_if(g, Mutation{MutationOp::Move, "k", "me", CompetenceBand::Novice, 0}),
                  GridError);
}

TEST_CASE("diff_reports") {
  auto r = assess(load_fixture_paper());
  CHECK(diff_reports(r, r).empty());

  auto changed = r;
  changed.assessments[2].recommendation.guidance = "x";
  auto d = diff_reports(r, changed);
  REQUIRE(d.size() == 1);
  CHECK(d[0].kpi_id == "growth-margins");
  CHECK(d[0].field == "guidance");

  auto fewer = r;
  fewer.assessments.pop_back();
  CHECK_THROWS_AS(diff_reports(r, fewer), std::invalid_argument);
  auto renamed = r;
  renamed.assessments[0].kpi_id = "other";
  CHECK_THROWS_AS(diff_reports(r, renamed), std::invalid_argument);
}

TEST_CASE("engine matches the formula oracle on random grids") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = testing::random_grid(rng);
    for (const auto& k : g.kpis()) {
      CHECK(classify_strategy(band_counts(g, k.id)) == oracle::oracle_strategy(g, k.id));
      CHECK(classify_competence(g, k.id) == oracle::oracle_competence(g, k.id));
    }
  }
}

TEST_CASE("strategy properties") {
  std::mt19937_64 rng(99);

  SUBCASE("permuting rows within a band changes nothing") {
    for (int trial = 0; trial < 200; ++trial) {
      auto g = testing::random_grid(rng);
      auto before = assess(g);
      auto placements = g.placements();
      std::uniform_int_distribution<std::size_t> kpi_pick(0, g.kpis().size() - 1);
      const auto kpi = g.kpis()[kpi_pick(rng)].id;
      for (auto band : kAllBands) {
        std::vector<std::uint32_t> rows(g.bands().capacity(band));
        std::iota(rows.begin(), rows.end(), 0u);
        std::shuffle(rows.begin(), rows.end(), rng);
        for (auto& p : placements) {
          if (p.kpi_id == kpi && p.band == band) p.row = rows[p.row];
        }
      }
      auto permuted = InvestmentGrid::from_parts(g.kpis(), g.entities(), g.bands(), placements,
                                                 g.revision());
      REQUIRE(validate(permuted).empty());
      CHECK(assess(permuted) == before);
    }
  }
  SUBCASE("intermediate band does not affect strategy") {
    for (int trial = 0; trial < 200; ++trial) {
      auto g = testing::random_grid(rng);
      const std::string kpi = g.kpis().front().id;
      auto before = classify_strategy(band_counts(g, kpi));
      for (const auto& [band, row] : testing::free_cells(g, kpi)) {
        if (band != CompetenceBand::Intermediate) continue;
        auto loose = testing::unplaced_entities(g, kpi);
        if (loose.empty()) break;
        g = place(g, kpi, loose.front(), band, row);
        CHECK(classify_strategy(band_counts(g, kpi)) == before);
      }
      for (const auto& p : g.column(kpi)) {
        if (p.band != CompetenceBand::Intermediate) continue;
        g = unplace(g, kpi, p.entity_id);
        CHECK(classify_strategy(band_counts(g, kpi)) == before);
      }
    }
  }
  SUBCASE("a mutation touches only its own column") {
    for (int trial = 0; trial < 200; ++trial) {
      auto g = testing::random_grid(rng);
      auto m = testing::random_mutation(rng, g);
      if (!m) continue;
      auto result = what_if(g, *m);
      for (const auto& d : result.deltas) CHECK(d.kpi_id == m->kpi_id);
      for (std::size_t i = 0; i < g.kpis().size(); ++i) {
        if (g.kpis()[i].id == m->kpi_id) continue;
        CHECK(result.before.assessments[i] == result.after.assessments[i]);
      }
    }
  }
  SUBCASE("adding to the advanced band keeps table stakes") {
    for (int trial = 0; trial < 200; ++trial) {
      auto g = testing::random_grid(rng);
      for (const auto& k : g.kpis()) {
        auto before = classify_strategy(band_counts(g, k.id));
        auto loose = testing::unplaced_entities(g, k.id);
        for (const auto& [band, row] : testing::free_cells(g, k.id)) {
          if (band != CompetenceBand::Advanced || loose.empty()) continue;
          auto after = classify_strategy(band_counts(place(g, k.id, loose.front(), band, row), k.id));
          if (before == StrategyClass::TableStakes) CHECK(after == StrategyClass::TableStakes);
          CHECK(after != StrategyClass::NotApplicable);
          break;
        }
      }
    }
  }
}
