#include "tgrid/persistence.hpp"

namespace tgrid {

std::vector<Kpi> default_kpis() {
  return {
      {"appeals-to-human-instinct", "Appeals to Human Instinct",
       "Does your product appeal to human instincts and passions (procreation, security, "
       "belongingness or basics needs?)"},
      {"career-accelerant", "Career Accelerant",
       "Is the company a top place to start a career (is it a McKinsey? If not, how to attract "
       "top talent?)"},
      {"growth-margins", "Growth + Margins", "Has the company healthy growth and profit margins?"},
      {"rundle", "Rundle",
       "Has the product potential to be wanted as part of a bundle (example: would Netflix be "
       "interested in buying your movie for their subscription?)"},
      {"vertical-integration", "Vertical Integration", "Are you leveraging Vertical integration?"},
      {"benjamin-button", "Benjamin Button Product", "Can it leverage Software economies of scale?"},
      {"visionary-storytelling", "Visionary Storytelling",
       "Does it have a compelling storytelling that inspires?"},
      {"likeability", "Likeability", "Is the leadership liked or disliked on social media?"},
  };
}

std::vector<Entity> case_study_entities() {
  return {
      {"edx", "EdX", false},        {"kam", "KAM", false},
      {"hi", "HI", false},          {"harbour-space", "Harbour.Space", false},
      {"ciid", "CIID", false},      {"udemy", "Udemy", false},
      {"coursera", "Coursera", false}, {"my-new-uni", "My New Uni", true},
  };
}

// Column-by-column transcription. Duplicate sightings of an entity inside one
// column keep the higher placement (see DISCREPANCIES.md).
InvestmentGrid load_fixture_paper() {
  using B = CompetenceBand;
  struct Cell {
    const char* kpi;
    const char* entity;
    B band;
    std::uint32_t row;
  };
  static constexpr Cell kCells[] = {
      {"appeals-to-human-instinct", "edx", B::Advanced, 0},
      {"appeals-to-human-instinct", "harbour-space", B::Advanced, 2},
      {"appeals-to-human-instinct", "hi", B::Advanced, 3},
      {"appeals-to-human-instinct", "kam", B::Intermediate, 0},
      {"appeals-to-human-instinct", "ciid", B::Intermediate, 2},
      {"appeals-to-human-instinct", "udemy", B::Novice, 1},
      {"appeals-to-human-instinct", "my-new-uni", B::Novice, 5},

      {"career-accelerant", "kam", B::Advanced, 0},
      {"career-accelerant", "hi", B::Advanced, 1},
      {"career-accelerant", "harbour-space", B::Intermediate, 1},
      {"career-accelerant", "ciid", B::Intermediate, 2},
      {"career-accelerant", "edx", B::Novice, 0},
      {"career-accelerant", "udemy", B::Novice, 1},
      {"career-accelerant", "my-new-uni", B::Novice, 5},

      {"growth-margins", "kam", B::Advanced, 0},
      {"growth-margins", "hi", B::Advanced, 3},
      {"growth-margins", "edx", B::Intermediate, 0},
      {"growth-margins", "udemy", B::Intermediate, 1},
      {"growth-margins", "coursera", B::Intermediate, 2},
      {"growth-margins", "ciid", B::Novice, 1},
      {"growth-margins", "harbour-space", B::Novice, 3},
      {"growth-margins", "my-new-uni", B::Novice, 5},

      {"rundle", "my-new-uni", B::Advanced, 1},
      {"rundle", "ciid", B::Novice, 0},
      {"rundle", "kam", B::Novice, 1},
      {"rundle", "hi", B::Novice, 2},
      {"rundle", "edx", B::Novice, 3},
      {"rundle", "udemy", B::Novice, 4},
      {"rundle", "harbour-space", B::Novice, 5},

      {"vertical-integration", "kam", B::Advanced, 0},
      {"vertical-integration", "hi", B::Advanced, 1},
      {"vertical-integration", "my-new-uni", B::Advanced, 2},
      {"vertical-integration", "ciid", B::Novice, 0},
      {"vertical-integration", "edx", B::Novice, 3},
      {"vertical-integration", "harbour-space", B::Novice, 5},

      {"benjamin-button", "edx", B::Advanced, 0},
      {"benjamin-button", "udemy", B::Advanced, 1},
      {"benjamin-button", "coursera", B::Advanced, 2},
      {"benjamin-button", "my-new-uni", B::Advanced, 3},
      {"benjamin-button", "hi", B::Intermediate, 2},
      {"benjamin-button", "ciid", B::Novice, 2},
      {"benjamin-button", "harbour-space", B::Novice, 5},

      {"visionary-storytelling", "edx", B::Advanced, 0},
      {"visionary-storytelling", "hi", B::Advanced, 1},
      {"visionary-storytelling", "harbour-space", B::Advanced, 2},
      {"visionary-storytelling", "kam", B::Intermediate, 0},
      {"visionary-storytelling", "my-new-uni", B::Intermediate, 2},
      {"visionary-storytelling", "ciid", B::Intermediate, 3},
      {"visionary-storytelling", "udemy", B::Novice, 3},

      {"likeability", "harbour-space", B::Advanced, 0},
      {"likeability", "kam", B::Advanced, 1},
      {"likeability", "hi", B::Advanced, 2},
      {"likeability", "my-new-uni", B::Intermediate, 1},
      {"likeability", "ciid", B::Intermediate, 3},
      {"likeability", "udemy", B::Novice, 3},
  };

  std::vector<Placement> placements;
  for (const auto& c : kCells) placements.push_back({c.kpi, c.entity, c.band, c.row});
  return InvestmentGrid::from_parts(default_kpis(), case_study_entities(), BandSpec{4, 4, 6},
                                    std::move(placements), 0);
}

}  // namespace tgrid
