#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fsotopo/scenario.hpp"

using namespace fsotopo;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"({
  "nodes": [
    {"id": 7, "x": 0, "y": 0, "transceivers": [{"kind": "fso"}, {"kind": "rf"}]},
    {"id": 9, "x": 3, "y": 4, "transceivers": [{"kind": "fso"}, {"kind": "rf"}]}
  ]
})";

}  // namespace

TEST_CASE("a minimal file gets the defaults") {
  const auto s = parse_scenario(kMinimal);
  REQUIRE(s.node_count() == 2);
  const auto& fso = s.nodes[0].transceivers[0];
  const auto& rf = s.nodes[0].transceivers[1];
  CHECK(fso.is_fso());
  CHECK(fso.c_max_mbps == 500.0);
  CHECK(fso.sensitivity_dbm == -43.0);
  CHECK(fso.max_beam_mrad == 240.0);
  CHECK_FALSE(rf.is_fso());
  CHECK(rf.c_max_mbps == 50.0);
  CHECK(rf.sensitivity_dbm == -84.0);
  CHECK(s.sets.powers_mw == std::vector<double>{5.0, 10.0, 15.0, 20.0});
  CHECK(s.sets.beams_mrad == std::vector<double>{80.0, 160.0, 240.0});
  CHECK(s.requests.empty());
  CHECK(s.distance(0, 1) == 5.0);
  CHECK(s.index_of(9) == 1);
  CHECK(s.index_of(8) == -1);
  CHECK(s.line_of_sight(0, 1));
}

TEST_CASE("requests and blocked pairs use node ids") {
  const auto s = parse_scenario(R"({
    "nodes": [
      {"id": 7, "x": 0, "y": 0, "transceivers": [{"kind": "fso"}]},
      {"id": 9, "x": 3, "y": 4, "transceivers": [{"kind": "fso"}]}
    ],
    "requests": [{"s": 9, "d": 7, "max_hops": 2, "min_throughput_mbps": 100}],
    "blocked_pairs": [[9, 7]]
  })");
  REQUIRE(s.requests.size() == 1);
  CHECK(s.requests[0].s == 1);
  CHECK(s.requests[0].d == 0);
  CHECK(s.requests[0].max_hops == 2);
  CHECK_FALSE(s.line_of_sight(0, 1));
  CHECK_FALSE(s.line_of_sight(1, 0));
}

TEST_CASE("a duplicate node id is rejected by name") {
  const auto err = error_of(R"({"nodes": [
    {"id": 4, "x": 0, "y": 0, "transceivers": [{"kind": "fso"}]},
    {"id": 4, "x": 1, "y": 0, "transceivers": [{"kind": "fso"}]}]})");
  CHECK(err.find("duplicate") != std::string::npos);
  CHECK(err.find('4') != std::string::npos);
}

TEST_CASE("every offending field is listed") {
  const auto err = error_of(R"({"nodes": [
    {"id": 1, "x": "far", "y": 0, "transceivers": [{"kind": "laser"}]},
    {"id": 2, "x": 0, "y": 0, "transceivers": [{"kind": "fso"}]}],
    "requests": [{"s": 1, "d": 5, "max_hops": 1, "min_throughput_mbps": 5}]})");
  CHECK(err.find("nodes[0].x") != std::string::npos);
  CHECK(err.find("nodes[0].transceivers[0].kind") != std::string::npos);
  CHECK(err.find("unknown node id 5") != std::string::npos);
  CHECK_FALSE(error_of("[1, 2]").empty());
  CHECK_FALSE(error_of("{not json").empty());
  CHECK_FALSE(error_of(R"({"nodes": []})").empty());
}

TEST_CASE("load_scenario reads files and reports missing ones") {
  const auto path = std::filesystem::temp_directory_path() / "fsotopo_minimal.json";
  std::ofstream(path) << kMinimal;
  CHECK(load_scenario(path.string()).node_count() == 2);
  std::filesystem::remove(path);
  CHECK_THROWS(load_scenario(path.string()));
}

TEST_CASE("the fixed 5-node instance carries eight requests") {
  const auto s = reference_scenario();
  CHECK(s.node_count() == 5);
  REQUIRE(s.requests.size() == 8);
  const auto& r = s.requests[4];
  CHECK(s.nodes[static_cast<std::size_t>(r.s)].id == 3);
  CHECK(s.nodes[static_cast<std::size_t>(r.d)].id == 1);
  CHECK(r.min_throughput_mbps == 250.0);
  CHECK(r.max_hops == 1);
}

TEST_CASE("serialization round-trips") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenerateParams g;
    g.seed = seed;
    g.blocked_fraction = 0.2;
    const auto s = generate_scenario(g);
    const auto text = scenario_to_json(s);
    const auto back = parse_scenario(text);
    REQUIRE(scenario_to_json(back) == text);
    REQUIRE(back.blocked_pairs == s.blocked_pairs);
  }
  const auto t = reference_scenario();
  CHECK(scenario_to_json(parse_scenario(scenario_to_json(t))) == scenario_to_json(t));
}

TEST_CASE("generation is deterministic per seed") {
  GenerateParams g;
  g.seed = 42;
  CHECK(scenario_to_json(generate_scenario(g)) == scenario_to_json(generate_scenario(g)));
  auto h = g;
  h.seed = 43;
  CHECK(scenario_to_json(generate_scenario(g)) != scenario_to_json(generate_scenario(h)));
}

TEST_CASE("two nodes and two requests give both ordered pairs") {
  GenerateParams g;
  g.nodes = 2;
  g.requests = 2;
  const auto s = generate_scenario(g);
  std::set<std::pair<int, int>> pairs;
  for (const auto& r : s.requests) pairs.emplace(r.s, r.d);
  CHECK(pairs == std::set<std::pair<int, int>>{{0, 1}, {1, 0}});
  g.requests = 3;
  CHECK_THROWS_AS(generate_scenario(g), std::invalid_argument);
  g.nodes = 1;
  g.requests = 0;
  CHECK_THROWS_AS(generate_scenario(g), std::invalid_argument);
}

TEST_CASE("thirty nodes stay inside a 150 m square") {
  GenerateParams g;
  g.nodes = 30;
  g.area = {150.0, 150.0};
  g.requests = 30;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    g.seed = seed;
    const auto s = generate_scenario(g);
    REQUIRE(s.node_count() == 30);
    for (const auto& n : s.nodes) {
      REQUIRE(n.position.x >= 0.0);
      REQUIRE(n.position.x <= 150.0);
      REQUIRE(n.position.y >= 0.0);
      REQUIRE(n.position.y <= 150.0);
    }
    std::set<std::pair<int, int>> pairs;
    for (const auto& r : s.requests) {
      REQUIRE(r.s != r.d);
      REQUIRE(pairs.emplace(r.s, r.d).second);
      REQUIRE(std::count(g.hop_choices.begin(), g.hop_choices.end(), r.max_hops) == 1);
      REQUIRE(std::count(g.throughput_choices.begin(), g.throughput_choices.end(),
                         r.min_throughput_mbps) == 1);
    }
  }
}

TEST_CASE("smaller request counts are prefixes and transceivers do not move nodes") {
  GenerateParams g;
  g.seed = 9;
  g.requests = 20;
  const auto big = generate_scenario(g);
  g.requests = 5;
  const auto small = generate_scenario(g);
  for (std::size_t r = 0; r < small.requests.size(); ++r) {
    CHECK(small.requests[r].s == big.requests[r].s);
    CHECK(small.requests[r].d == big.requests[r].d);
    CHECK(small.requests[r].max_hops == big.requests[r].max_hops);
    CHECK(small.requests[r].min_throughput_mbps == big.requests[r].min_throughput_mbps);
  }
  g.transceivers = 5;
  const auto more = generate_scenario(g);
  for (std::size_t i = 0; i < more.nodes.size(); ++i) {
    CHECK(more.nodes[i].position.x == small.nodes[i].position.x);
    CHECK(more.nodes[i].transceivers.size() == 5);
    CHECK_FALSE(more.nodes[i].transceivers[0].is_fso());
  }
}
