#include <filesystem>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "tgrid/persistence.hpp"
#include "tgrid/service.hpp"

using namespace tgrid;
using namespace tgrid::service;
using nlohmann::json;

namespace {

std::string create_fixture_session(SessionStore& store) {
  auto r = store.create(save_grid(load_fixture_paper()));
  REQUIRE(r.status == 201);
  return json::parse(r.body)["id"];
}

json mutation(std::string_view op, std::string_view kpi, std::string_view entity,
              std::optional<std::string_view> band = std::nullopt,
              std::optional<int> row = std::nullopt, std::optional<int> revision = std::nullopt) {
  json j{{"op", op}, {"kpi", kpi}, {"entity", entity}};
  if (band) j["band"] = *band;
  if (row) j["row"] = *row;
  if (revision) j["expected_revision"] = *revision;
  return j;
}

}  // namespace

TEST_CASE("parse_mutation_request") {
  auto req = parse_mutation_request(
      R"({"op":"move","kpi":"k","entity":"e","band":"novice","row":2,"expected_revision":5})",
      true);
  CHECK(req.mutation == Mutation{MutationOp::Move, "k", "e", CompetenceBand::Novice, 2});
  CHECK(req.expected_revision == 5u);

  CHECK_THROWS_AS(parse_mutation_request(R"({"op":"unplace","kpi":"k","entity":"e"})", true),
                  std::invalid_argument);
  CHECK_NOTHROW(parse_mutation_request(R"({"op":"unplace","kpi":"k","entity":"e"})", false));
  CHECK_THROWS_AS(parse_mutation_request(R"({"op":"place","kpi":"k","entity":"e"})", false),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_mutation_request(R"({"op":"jump","kpi":"k","entity":"e"})", false),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_mutation_request(R"({"op":"place","kpi":"k","entity":"e","band":"novice","row":-1})",
                             false),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_mutation_request(R"({"op":"unplace","kpi":"k","entity":"e","x":1})",
                                         false),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_mutation_request("nope", false), std::invalid_argument);
}

TEST_CASE("create_session") {
  SessionStore store;
  auto r = store.create(save_grid(load_fixture_paper()));
  CHECK(r.status == 201);
  auto body = json::parse(r.body);
  CHECK(body["revision"] == 0);
  auto id = body["id"].get<std::string>();
  CHECK(id.size() == 32);

  auto second = json::parse(store.create(save_grid(load_fixture_paper())).body)["id"];
  CHECK(second != id);

  auto bad = store.create("{}");
  CHECK(bad.status == 400);
  CHECK(json::parse(bad.body)["code"] == "FORMAT");

  auto invalid = json::parse(save_grid(load_fixture_paper()));
  invalid["placements"].push_back(invalid["placements"][0]);
  auto r2 = store.create(invalid.dump());
  CHECK(r2.status == 400);
  auto err = json::parse(r2.body);
  CHECK(err["code"] == "INVALID");
  CHECK(err["violations"].size() > 0);
  CHECK(store.session_ids().size() == 2);
}

TEST_CASE("apply_mutation") {
  SessionStore store;
  auto id = create_fixture_session(store);

  auto ok = store.mutate(id, mutation("place", "rundle", "coursera", "advanced", 0, 0).dump());
  CHECK(ok.status == 200);
  CHECK(json::parse(ok.body)["revision"] == 1);

  auto stale = store.mutate(id, mutation("unplace", "rundle", "coursera", {}, {}, 0).dump());
  CHECK(stale.status == 409);
  CHECK(json::parse(stale.body)["code"] == "REVISION_MISMATCH");
  CHECK(store.grid(id)->revision() == 1);
  CHECK(store.grid(id)->placement_of("rundle", "coursera").has_value());

  auto dup = store.mutate(id, mutation("place", "likeability", "edx", "advanced", 0, 1).dump());
  CHECK(dup.status == 422);
  CHECK(json::parse(dup.body)["code"] == "DUP_CELL");
  CHECK(store.grid(id)->revision() == 1);

  CHECK(store.mutate("missing", mutation("unplace", "rundle", "kam", {}, {}, 0).dump()).status ==
        404);
  CHECK(store.mutate(id, R"({"op":"place"})").status == 400);
  CHECK(store.grid(id)->revision() == 1);

  SUBCASE("GET grid matches the canonical encoding") {
    auto r = store.get_grid(id);
    CHECK(r.status == 200);
    CHECK(r.body == save_grid(*store.grid(id)));
  }
}

TEST_CASE("report, lint and what-if") {
  SessionStore store;
  auto id = create_fixture_session(store);

  auto report = json::parse(store.report(id).body);
  CHECK(report["assessments"][4]["kpi_id"] == "vertical-integration");
  CHECK(report["assessments"][4]["competence"] == "Advanced");
  CHECK(report["assessments"][4]["strategy"] == "Differentiator");

  auto lint = json::parse(store.lint(id).body);
  CHECK(lint["warnings"].size() == 2);

  auto before = store.report(id).body;
  auto w = store.what_if(id, mutation("move", "career-accelerant", "my-new-uni", "advanced", 2).dump());
  CHECK(w.status == 200);
  auto wj = json::parse(w.body);
  CHECK(wj["deltas"].size() > 0);
  for (const auto& d : wj["deltas"]) CHECK(d["kpi_id"] == "career-accelerant");
  CHECK(store.report(id).body == before);
  CHECK(store.what_if(id,
                      mutation("move", "career-accelerant", "my-new-uni", "advanced", 2).dump())
            .body == w.body);

  auto illegal = store.what_if(id, mutation("move", "career-accelerant", "my-new-uni", "advanced", 0).dump());
  CHECK(illegal.status == 422);
  CHECK(store.report("nope").status == 404);
  CHECK(store.lint("nope").status == 404);
  CHECK(store.what_if("nope", "{}").status == 404);

  SUBCASE("empty grid session") {
    auto empty_id = json::parse(store.create(save_grid(new_grid(default_kpis(),
                                                                case_study_entities())))
                                    .body)["id"]
                        .get<std::string>();
    auto r = json::parse(store.report(empty_id).body);
    for (const auto& a : r["assessments"]) {
      CHECK(a["competence"] == "Unplaced");
      CHECK(a["strategy"] == "NotApplicable");
    }
  }
  SUBCASE("report revision follows mutations") {
    store.mutate(id, mutation("unplace", "rundle", "kam", {}, {}, 0).dump());
    CHECK(json::parse(store.report(id).body)["grid_revision"] == 1);
  }
}

TEST_CASE("concurrent mutations with the same revision") {
  SessionStore store;
  auto id = create_fixture_session(store);
  for (int round = 0; round < 20; ++round) {
    auto rev = static_cast<int>(store.grid(id)->revision());
    auto body_a = mutation("place", "rundle", "coursera", "advanced", 0, rev).dump();
    auto body_b = mutation("place", "rundle", "coursera", "advanced", 2, rev).dump();
    if (store.grid(id)->placement_of("rundle", "coursera")) {
      body_a = mutation("unplace", "rundle", "coursera", {}, {}, rev).dump();
      body_b = body_a;
    }
    int sa = 0, sb = 0;
    std::thread ta([&] { sa = store.mutate(id, body_a).status; });
    std::thread tb([&] { sb = store.mutate(id, body_b).status; });
    ta.join();
    tb.join();
    CHECK(((sa == 200 && sb == 409) || (sa == 409 && sb == 200)));
    CHECK(store.grid(id)->revision() == static_cast<std::uint64_t>(rev + 1));
  }
}

TEST_CASE("snapshot") {
  SessionStore store;
  auto id = create_fixture_session(store);
  auto dir = std::filesystem::temp_directory_path() / "tgrid-snapshot-test";
  std::filesystem::remove_all(dir);
  store.snapshot(dir);
  std::ifstream in(dir / (id + ".tgrid.json"));
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(bytes == save_grid(load_fixture_paper()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("HTTP routes") {
  SessionStore store;
  auto ui = std::filesystem::temp_directory_path() / "tgrid-ui-test";
  std::filesystem::create_directories(ui);
  { std::ofstream(ui / "index.html") << "<!doctype html><title>tgrid</title>"; }

  HttpServer server(store, ui);
  REQUIRE(server.bind("127.0.0.1", 0));
  std::thread t([&] { server.run(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", server.port());
  auto health = client.Get("/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->body == "ok");

  auto index = client.Get("/");
  REQUIRE(index);
  CHECK(index->status == 200);
  CHECK(index->body.find("<title>tgrid</title>") != std::string::npos);

  auto created = client.Post("/v1/grids", save_grid(load_fixture_paper()), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  auto id = json::parse(created->body)["id"].get<std::string>();

  auto grid = client.Get("/v1/grids/" + id);
  REQUIRE(grid);
  CHECK(grid->body == save_grid(load_fixture_paper()));

  auto m = client.Post("/v1/grids/" + id + "/mutations",
                       mutation("unplace", "rundle", "kam", {}, {}, 0).dump(), "application/json");
  REQUIRE(m);
  CHECK(m->status == 200);

  auto report = client.Get("/v1/grids/" + id + "/report");
  REQUIRE(report);
  CHECK(json::parse(report->body)["grid_revision"] == 1);

  auto wi = client.Post("/v1/grids/" + id + "/what-if",
                        mutation("place", "rundle", "kam", "novice", 1).dump(), "application/json");
  REQUIRE(wi);
  CHECK(wi->status == 200);

  auto lint = client.Get("/v1/grids/" + id + "/lint");
  REQUIRE(lint);
  CHECK(lint->status == 200);

  auto missing = client.Get("/v1/grids/ffff/report");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body)["code"] == "NOT_FOUND");

  server.stop();
  t.join();
  std::filesystem::remove_all(ui);
}

TEST_CASE("bind fails on an occupied port") {
  SessionStore store;
  HttpServer first(store);
  REQUIRE(first.bind("127.0.0.1", 0));
  HttpServer second(store);
  CHECK_FALSE(second.bind("127.0.0.1", first.port()));
}
