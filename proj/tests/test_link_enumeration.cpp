#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "doctest.h"
#include "fsotopo/channel_model.hpp"
#include "fsotopo/link_enumeration.hpp"
#include "support.hpp"

using namespace fsotopo;
using fsotopo::testing::fso_spec;
using fsotopo::testing::make_node;
using fsotopo::testing::rf_spec;
using fsotopo::testing::two_node_scenario;

namespace {

using Tuple = std::tuple<int, int, int, double, double, double>;

std::set<Tuple> tuples(const CandidateSet& cs) {
  std::set<Tuple> out;
  for (const auto& c : cs.candidates()) {
    out.emplace(c.from, c.to, c.tx, c.power_mw, c.theta_t_mrad, c.theta_r_mrad);
  }
  return out;
}

// Mixed scenario: transceiver 0 RF, the rest FSO, per-node transceiver counts
// and sensitivities vary, some pairs lack line of sight.
Scenario random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Scenario s;
  const int n = pick(2, 5);
  for (int i = 0; i < n; ++i) {
    std::vector<TransceiverSpec> ts;
    const int t = pick(1, 3);
    for (int k = 0; k < t; ++k) {
      auto spec = k == 0 ? rf_spec() : fso_spec();
      spec.sensitivity_dbm += 6.0 * (u(rng) - 0.5);
      if (spec.is_fso()) spec.max_beam_mrad = pick(0, 1) ? 240.0 : 100.0;
      spec.max_power_mw = pick(0, 3) ? 1000.0 : 7.0;
      ts.push_back(spec);
    }
    s.nodes.push_back(make_node(i + 1, 40.0 * u(rng), 40.0 * u(rng), ts));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (u(rng) < 0.2) s.blocked_pairs.emplace(i, j);
    }
  }
  s.sets.powers_mw = {5.0, 10.0, 20.0};
  s.sets.beams_mrad = {80.0, 160.0, 240.0};
  return s;
}

// Direct definition of availability, independent of max_range.
std::set<Tuple> oracle(const Scenario& s) {
  std::set<Tuple> out;
  const int n = s.node_count();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& a = s.nodes[static_cast<std::size_t>(i)];
      const auto& b = s.nodes[static_cast<std::size_t>(j)];
      const double d = std::hypot(a.position.x - b.position.x, a.position.y - b.position.y);
      for (std::size_t t = 0; t < std::min(a.transceivers.size(), b.transceivers.size()); ++t) {
        const auto& tx = a.transceivers[t];
        const auto& rx = b.transceivers[t];
        if (tx.kind != rx.kind) continue;
        if (tx.is_fso() && s.blocked_pairs.count({std::min(i, j), std::max(i, j)})) continue;
        const double sens = std::pow(10.0, rx.sensitivity_dbm / 10.0);
        for (double p : s.sets.powers_mw) {
          if (p > tx.max_power_mw) continue;
          if (!tx.is_fso()) {
            const double pr = p * 1e-6 / std::max(d * d, 1.0);
            if (pr >= sens) out.emplace(i, j, static_cast<int>(t), p, 0.0, 0.0);
            continue;
          }
          for (double bt : s.sets.beams_mrad) {
            if (bt > tx.max_beam_mrad) continue;
            const double ratio = tx.diameter_m / (tx.diameter_m + 100.0 * d * bt * 1e-3);
            if (p * ratio * ratio < sens) continue;
            for (double br : s.sets.beams_mrad) {
              if (br <= rx.max_beam_mrad) out.emplace(i, j, static_cast<int>(t), p, bt, br);
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("a single node has no candidates") {
  Scenario s;
  s.nodes.push_back(make_node(1, 0.0, 0.0, {fso_spec(), rf_spec()}));
  s.sets = {{5.0}, {80.0}};
  CHECK(enumerate_candidates(s).empty());
}

TEST_CASE("nodes beyond every range have no candidates") {
  auto s = two_node_scenario({5.0, 10.0}, {80.0, 160.0});
  s.nodes[1].position = {1000.0, 0.0};
  for (double p : s.sets.powers_mw) {
    for (double b : s.sets.beams_mrad) REQUIRE(max_range(fso_spec(), p, b * 1e-3, s.channel) < 1000.0);
  }
  CHECK(enumerate_candidates(s).empty());
}

TEST_CASE("empty sets and empty node lists are rejected") {
  Scenario s;
  CHECK_THROWS_AS(enumerate_candidates(s), std::invalid_argument);
  auto t = two_node_scenario();
  t.sets.beams_mrad.clear();
  CHECK_THROWS_AS(enumerate_candidates(t), std::invalid_argument);
}

TEST_CASE("enumeration agrees with the availability oracle") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto s = random_scenario(seed);
    const auto cs = enumerate_candidates(s);
    REQUIRE_MESSAGE(tuples(cs) == oracle(s), "seed " << seed);
    REQUIRE(cs.size() == tuples(cs).size());
  }
}

TEST_CASE("candidate fields are consistent") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto s = random_scenario(seed);
    const auto cs = enumerate_candidates(s);
    for (std::size_t c = 0; c < cs.size(); ++c) {
      const auto& cand = cs[c];
      const auto& rx = s.nodes[static_cast<std::size_t>(cand.to)].transceivers[static_cast<std::size_t>(cand.tx)];
      const auto& tx = s.nodes[static_cast<std::size_t>(cand.from)].transceivers[static_cast<std::size_t>(cand.tx)];
      REQUIRE(cand.received_mw >= dbm_to_mw(rx.sensitivity_dbm) * (1.0 - 1e-9));
      REQUIRE(cand.ber >= 0.0);
      REQUIRE(cand.ber <= 0.5);
      REQUIRE(cand.bandwidth_mbps > 0.0);
      REQUIRE(cand.bandwidth_mbps <= tx.c_max_mbps);
      REQUIRE(cand.capacity_mbps() <= cand.bandwidth_mbps);
      REQUIRE(cand.power_mw == s.sets.powers_mw[static_cast<std::size_t>(cand.power_index)]);
      REQUIRE(cand.omni() == !tx.is_fso());
      if (c > 0) {
        const auto& prev = cs[c - 1];
        REQUIRE(std::tie(prev.from, prev.to, prev.tx, prev.power_index, prev.beam_t_index, prev.beam_r_index) <
                std::tie(cand.from, cand.to, cand.tx, cand.power_index, cand.beam_t_index, cand.beam_r_index));
      }
    }
  }
}

TEST_CASE("link tables index the candidate list") {
  const auto s = random_scenario(7);
  const auto cs = enumerate_candidates(s);
  std::size_t seen = 0;
  for (int l = 0; l < static_cast<int>(cs.links().size()); ++l) {
    const auto key = cs.links()[static_cast<std::size_t>(l)];
    REQUIRE(cs.find_link(key) == l);
    const auto [b, e] = cs.link_range(l);
    REQUIRE(b < e);
    for (int c = b; c < e; ++c) {
      REQUIRE(cs.link_of(c) == l);
      REQUIRE(cs[static_cast<std::size_t>(c)].from == key.from);
      REQUIRE(cs[static_cast<std::size_t>(c)].to == key.to);
      REQUIRE(cs[static_cast<std::size_t>(c)].tx == key.tx);
    }
    seen += static_cast<std::size_t>(e - b);
  }
  CHECK(seen == cs.size());
  std::size_t leaving = 0;
  for (int i = 0; i < s.node_count(); ++i) {
    for (int t = 0; t < s.max_transceivers(); ++t) leaving += cs.leaving(i, t).size();
  }
  CHECK(leaving == cs.size());
  CHECK(cs.leaving(0, -1).empty());
  CHECK(cs.leaving(0, 99).empty());
  CHECK_FALSE(cs.find_link({0, 0, 0}).has_value());
}

TEST_CASE("candidate set rejects duplicates and self links") {
  LinkCandidate a;
  a.from = 0;
  a.to = 1;
  CHECK_THROWS_AS(CandidateSet({a, a}, 2, 1), std::invalid_argument);
  LinkCandidate self;
  CHECK_THROWS_AS(CandidateSet({self}, 2, 1), std::invalid_argument);
}

TEST_CASE("per-tuple sharing divides by every tuple leaving the transceiver") {
  auto s = two_node_scenario({5.0}, {80.0, 160.0});
  s.channel.bandwidth_sharing = BandwidthSharing::kPerTransceiverTuples;
  const auto cs = enumerate_candidates(s);
  REQUIRE(cs.leaving(0, 0).size() == 4);
  for (int c : cs.leaving(0, 0)) CHECK(cs[static_cast<std::size_t>(c)].bandwidth_mbps == 125.0);
}

TEST_CASE("coverage sharing counts receivers in the RF circle") {
  Scenario s;
  s.nodes.push_back(make_node(1, 0.0, 0.0, {rf_spec()}));
  s.nodes.push_back(make_node(2, 10.0, 0.0, {rf_spec()}));
  s.nodes.push_back(make_node(3, -10.0, 0.0, {rf_spec()}));
  s.sets = {{5.0}, {80.0}};
  const auto cs = enumerate_candidates(s);
  REQUIRE(cs.leaving(0, 0).size() == 2);
  for (int c : cs.leaving(0, 0)) CHECK(cs[static_cast<std::size_t>(c)].bandwidth_mbps == 25.0);
  // Nodes 2 and 3 are 20 m apart, each reaching node 1 and the other.
  for (int c : cs.leaving(1, 0)) CHECK(cs[static_cast<std::size_t>(c)].bandwidth_mbps == 25.0);
}

TEST_CASE("coverage sharing counts receivers inside the FSO sector") {
  Scenario s;
  s.nodes.push_back(make_node(1, 0.0, 0.0, {fso_spec()}));
  s.nodes.push_back(make_node(2, 5.0, 0.0, {fso_spec()}));
  s.nodes.push_back(make_node(3, 5.0, 0.1, {fso_spec()}));
  s.nodes.push_back(make_node(4, 0.0, 5.0, {fso_spec()}));
  s.sets = {{5.0}, {80.0}};
  const auto cs = enumerate_candidates(s);
  for (int c : cs.leaving(0, 0)) {
    const auto& cand = cs[static_cast<std::size_t>(c)];
    CHECK(cand.bandwidth_mbps == (cand.to == 3 ? 500.0 : 250.0));
  }
}

TEST_CASE("larger power and beam sets only add candidates") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto s = random_scenario(seed);
    s.sets = {{5.0, 20.0}, {80.0, 240.0}};
    const auto small = tuples(enumerate_candidates(s));
    s.sets = {{5.0, 10.0, 20.0, 40.0}, {40.0, 80.0, 160.0, 240.0}};
    const auto large = tuples(enumerate_candidates(s));
    REQUIRE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
}

TEST_CASE("mirroring the layout preserves the candidate set") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto s = random_scenario(seed);
    const auto before = enumerate_candidates(s);
    for (auto& n : s.nodes) n.position.x = -n.position.x;
    const auto after = enumerate_candidates(s);
    REQUIRE(tuples(before) == tuples(after));
    for (std::size_t c = 0; c < before.size(); ++c) {
      REQUIRE(before[c].bandwidth_mbps == doctest::Approx(after[c].bandwidth_mbps));
      REQUIRE(before[c].received_mw == doctest::Approx(after[c].received_mw));
    }
  }
}

TEST_CASE("transmit power is capped per transceiver") {
  auto s = two_node_scenario({5.0, 10.0, 20.0}, {80.0});
  s.nodes[0].transceivers[0].max_power_mw = 10.0;
  const auto cs = enumerate_candidates(s);
  for (int c : cs.leaving(0, 0)) CHECK(cs[static_cast<std::size_t>(c)].power_mw <= 10.0);
  CHECK(cs.leaving(0, 0).size() == 2);
  CHECK(cs.leaving(1, 0).size() == 3);
}
