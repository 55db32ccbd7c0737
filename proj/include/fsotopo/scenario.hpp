#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsotopo/network.hpp"

namespace fsotopo {

// Scenario files use node ids, dBm sensitivities and mrad beams. Omitted
// transceiver fields take the defaults of their kind; omitted sets take
// {5, 10, 15, 20} mW and {80, 160, 240} mrad. Throws std::invalid_argument
// naming every offending field.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

// Inverse of parse_scenario; output is deterministic.
std::string scenario_to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

TransceiverSpec default_transceiver(TransceiverKind kind);

struct GenerateParams {
  int nodes = 10;
  Area area{30.0, 30.0};
  int requests = 5;
  std::uint64_t seed = 1;
  int transceivers = 3;  // one RF, the rest FSO
  DiscreteSets sets{{5.0, 10.0, 15.0, 20.0}, {80.0, 160.0, 240.0}};
  std::vector<int> hop_choices{1, 2, 3};
  std::vector<double> throughput_choices{5.0, 100.0, 250.0};
  double blocked_fraction = 0.0;  // share of node pairs without line of sight
  ChannelParams channel;
};

// Positions, the order of the requested pairs and their QoS draws come from
// fixed positions of the random stream, so for one seed a smaller request
// count yields a prefix of a larger one and the transceiver count does not
// move nodes. Throws std::invalid_argument when requests > n (n - 1).
Scenario generate_scenario(const GenerateParams& params);

// Fixed five-node instance with eight QoS requests on a hand-made placement
// (ids 1..5, transceiver 0 RF, 1..3 FSO).
Scenario reference_scenario();

}  // namespace fsotopo
