#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fsotopo {

enum class TransceiverKind { kRf, kFso };

// Sign convention of the FSK bit error rate expression.
//   kMonotone: 1/2 erfc(+Pr / 2Pn), decreasing in received power.
//   kLiteral:  1/2 erfc(-Pr / 2Pn), kept for fidelity experiments only.
enum class BerMode { kMonotone, kLiteral };

// How the capacity of a transmitting transceiver is split among the
// availability tuples that leave it.
//   kCoverageTemplate: receivers inside the coverage template of the tuple
//     (circle for RF, beam sector aimed at the receiver for FSO).
//   kPerTransceiverTuples: every tuple (j, p, theta_t, theta_r) leaving (i, t).
enum class BandwidthSharing { kCoverageTemplate, kPerTransceiverTuples };

struct Position {
  double x = 0.0;
  double y = 0.0;
};

struct TransceiverSpec {
  TransceiverKind kind = TransceiverKind::kFso;
  double c_max_mbps = 500.0;
  double sensitivity_dbm = -43.0;
  double diameter_m = 0.5;
  double max_beam_mrad = 240.0;  // ignored for RF
  double max_power_mw = 1000.0;

  bool is_fso() const { return kind == TransceiverKind::kFso; }
};

struct NodeSpec {
  int id = 0;
  Position position;
  std::vector<TransceiverSpec> transceivers;
};

struct ChannelParams {
  double p_noise_rf_mw = 1e-9;
  double p_noise_fso_mw = 2e-6;
  double responsivity = 0.5;  // A/W
  BerMode ber_mode = BerMode::kMonotone;
  double rf_pathloss_exponent = 2.0;
  double rf_reference_gain = 1e-6;  // received/transmitted power ratio at 1 m
  // Upper bound on any computed range; used when the beam divergence is 0.
  double range_cap_m = 1.0e4;
  BandwidthSharing bandwidth_sharing = BandwidthSharing::kCoverageTemplate;

  void validate() const;
};

// Allowed transmit powers (mW) and beam openings (mrad), strictly increasing.
struct DiscreteSets {
  std::vector<double> powers_mw;
  std::vector<double> beams_mrad;

  void validate() const;
};

struct QosRequest {
  int s = 0;  // node index
  int d = 0;  // node index
  int max_hops = 1;
  double min_throughput_mbps = 1.0;
};

struct Area {
  double width_m = 0.0;
  double height_m = 0.0;
};

struct Scenario {
  std::vector<NodeSpec> nodes;
  ChannelParams channel;
  DiscreteSets sets;
  std::vector<QosRequest> requests;
  // Unordered pairs of node indices without line of sight; stored (min, max).
  std::set<std::pair<int, int>> blocked_pairs;
  Area area;
  std::uint64_t seed = 0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int index_of(int node_id) const;  // -1 when absent
  bool line_of_sight(int a, int b) const;
  double distance(int a, int b) const;
  int max_transceivers() const;

  // Checks every invariant and throws std::invalid_argument listing all
  // offending fields.
  void validate() const;
};

}  // namespace fsotopo
