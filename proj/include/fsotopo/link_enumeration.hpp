#pragma once

#include <compare>
#include <optional>
#include <utility>
#include <vector>

#include "fsotopo/network.hpp"

namespace fsotopo {

// Beam label carried by RF candidates (omnidirectional).
inline constexpr double kOmniBeam = 0.0;

// One availability tuple l(i, j, t, p, theta_t, theta_r). Nodes are indices
// into Scenario::nodes; indices into DiscreteSets are kept alongside the
// physical values. RF candidates have beam indices of -1.
struct LinkCandidate {
  int from = 0;
  int to = 0;
  int tx = 0;
  int power_index = 0;
  int beam_t_index = -1;
  int beam_r_index = -1;
  double power_mw = 0.0;
  double theta_t_mrad = kOmniBeam;
  double theta_r_mrad = kOmniBeam;
  double received_mw = 0.0;
  double ber = 0.5;
  double bandwidth_mbps = 0.0;

  // BER-adjusted bandwidth, B * (1 - BER).
  double capacity_mbps() const { return bandwidth_mbps * (1.0 - ber); }
  bool omni() const { return beam_t_index < 0; }
};

struct LinkKey {
  int from = 0;
  int to = 0;
  int tx = 0;
  auto operator<=>(const LinkKey&) const = default;
};

class CandidateSet {
 public:
  CandidateSet() = default;
  // Sorts by (from, to, tx, p, theta_t, theta_r) and builds the lookup
  // tables. Throws std::invalid_argument on duplicate tuples.
  CandidateSet(std::vector<LinkCandidate> candidates, int node_count,
               int max_transceivers);

  const std::vector<LinkCandidate>& candidates() const { return candidates_; }
  const LinkCandidate& operator[](std::size_t i) const { return candidates_[i]; }
  std::size_t size() const { return candidates_.size(); }
  bool empty() const { return candidates_.empty(); }

  // Distinct (i, j, t) with at least one candidate, in sorted order.
  const std::vector<LinkKey>& links() const { return links_; }
  // Half-open range of candidate indices belonging to links()[link].
  std::pair<int, int> link_range(int link) const {
    return {link_begin_[static_cast<std::size_t>(link)],
            link_begin_[static_cast<std::size_t>(link) + 1]};
  }
  std::optional<int> find_link(const LinkKey& key) const;
  int link_of(int candidate) const {
    return candidate_link_[static_cast<std::size_t>(candidate)];
  }
  // Candidate indices leaving transceiver t of node i.
  const std::vector<int>& leaving(int from, int tx) const;

  void set_bandwidth(int candidate, double mbps) {
    candidates_[static_cast<std::size_t>(candidate)].bandwidth_mbps = mbps;
  }

 private:
  std::vector<LinkCandidate> candidates_;
  std::vector<LinkKey> links_;
  std::vector<int> link_begin_{0};
  std::vector<int> candidate_link_;
  int max_transceivers_ = 0;
  std::vector<std::vector<int>> leaving_;
};

// Precomputes every availability tuple of the scenario, with BER and shared
// bandwidth filled in. Requests are ignored.
CandidateSet enumerate_candidates(const Scenario& scenario);

// Per-candidate bandwidth for every candidate leaving transceiver (i, t):
// c_max divided by the number of tuples sharing it under `mode`.
std::vector<std::pair<int, double>> shared_bandwidth(const CandidateSet& cs,
                                                     const Scenario& scenario,
                                                     int from, int tx,
                                                     BandwidthSharing mode);

}  // namespace fsotopo
