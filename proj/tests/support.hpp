#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fsotopo/network.hpp"

namespace fsotopo::testing {

inline TransceiverSpec rf_spec() {
  TransceiverSpec t;
  t.kind = TransceiverKind::kRf;
  t.c_max_mbps = 50.0;
  t.sensitivity_dbm = -84.0;
  return t;
}

inline TransceiverSpec fso_spec() { return TransceiverSpec{}; }

inline NodeSpec make_node(int id, double x, double y,
                          std::vector<TransceiverSpec> transceivers) {
  NodeSpec n;
  n.id = id;
  n.position = {x, y};
  n.transceivers = std::move(transceivers);
  return n;
}

// Two nodes 5 m apart with one FSO transceiver each.
inline Scenario two_node_scenario(std::vector<double> powers = {5.0, 10.0},
                                  std::vector<double> beams = {80.0}) {
  Scenario s;
  s.nodes.push_back(make_node(1, 0.0, 0.0, {fso_spec()}));
  s.nodes.push_back(make_node(2, 5.0, 0.0, {fso_spec()}));
  s.sets.powers_mw = std::move(powers);
  s.sets.beams_mrad = std::move(beams);
  return s;
}

// Small random scenario; the instance size is kept near the brute-force cap
// by the choice of ranges below.
inline Scenario tiny_random_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  std::uniform_real_distribution<double> coord(0.0, 12.0);
  Scenario s;
  const int n = pick(2, 3);
  const bool rf_first = pick(0, 1) == 1;
  for (int i = 0; i < n; ++i) {
    s.nodes.push_back(make_node(i + 1, coord(rng), coord(rng),
                                {rf_first ? rf_spec() : fso_spec()}));
  }
  s.sets.powers_mw = pick(0, 1) ? std::vector<double>{5.0, 10.0} : std::vector<double>{5.0};
  s.sets.beams_mrad = pick(0, 1) ? std::vector<double>{80.0, 160.0} : std::vector<double>{80.0};
  const int requests = pick(0, 2);
  for (int r = 0; r < requests; ++r) {
    QosRequest q;
    q.s = pick(0, n - 1);
    q.d = (q.s + pick(1, n - 1)) % n;
    q.max_hops = pick(1, 2);
    q.min_throughput_mbps = rf_first ? 5.0 * pick(1, 6) : 50.0 * pick(1, 8);
    s.requests.push_back(q);
  }
  return s;
}

}  // namespace fsotopo::testing
