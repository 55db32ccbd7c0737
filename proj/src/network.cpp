#include "fsotopo/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fsotopo {

namespace {

void check_sorted_positive(const std::vector<double>& values, const char* name,
                           std::vector<std::string>& errors) {
  if (values.empty()) {
    errors.push_back(std::string(name) + ": must not be empty");
    return;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      errors.push_back(std::string(name) + "[" + std::to_string(i) +
                       "]: must be finite and > 0");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      errors.push_back(std::string(name) + ": must be strictly increasing");
    }
  }
}

[[noreturn]] void throw_errors(const std::vector<std::string>& errors) {
  std::ostringstream out;
  out << "invalid scenario:";
  for (const auto& e : errors) out << "\n  " << e;
  throw std::invalid_argument(out.str());
}

void check_channel(const ChannelParams& c, std::vector<std::string>& errors) {
  if (!(c.p_noise_rf_mw > 0.0)) errors.push_back("channel.p_noise_rf_mw: must be > 0");
  if (!(c.p_noise_fso_mw > 0.0)) errors.push_back("channel.p_noise_fso_mw: must be > 0");
  if (!(c.responsivity > 0.0)) errors.push_back("channel.responsivity: must be > 0");
  if (!(c.rf_pathloss_exponent >= 1.0)) {
    errors.push_back("channel.rf_pathloss_exponent: must be >= 1");
  }
  if (!(c.rf_reference_gain > 0.0)) errors.push_back("channel.rf_reference_gain: must be > 0");
  if (!(c.range_cap_m > 0.0)) errors.push_back("channel.range_cap_m: must be > 0");
}

}  // namespace

void ChannelParams::validate() const {
  std::vector<std::string> errors;
  check_channel(*this, errors);
  if (!errors.empty()) throw_errors(errors);
}

void DiscreteSets::validate() const {
  std::vector<std::string> errors;
  check_sorted_positive(powers_mw, "powers_mw", errors);
  check_sorted_positive(beams_mrad, "beams_mrad", errors);
  if (!errors.empty()) throw_errors(errors);
}

int Scenario::index_of(int node_id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == node_id) return static_cast<int>(i);
  }
  return -1;
}

bool Scenario::line_of_sight(int a, int b) const {
  return !blocked_pairs.contains({std::min(a, b), std::max(a, b)});
}

double Scenario::distance(int a, int b) const {
  const auto& pa = nodes[static_cast<std::size_t>(a)].position;
  const auto& pb = nodes[static_cast<std::size_t>(b)].position;
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

int Scenario::max_transceivers() const {
  std::size_t best = 0;
  for (const auto& n : nodes) best = std::max(best, n.transceivers.size());
  return static_cast<int>(best);
}

void Scenario::validate() const {
  std::vector<std::string> errors;
  if (nodes.empty()) errors.push_back("nodes: must not be empty");
  std::set<int> ids;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    const std::string where = "nodes[" + std::to_string(i) + "]";
    if (!ids.insert(n.id).second) {
      errors.push_back(where + ".id: duplicate node id " + std::to_string(n.id));
    }
    if (!std::isfinite(n.position.x) || !std::isfinite(n.position.y)) {
      errors.push_back(where + ": position must be finite");
    }
    if (n.transceivers.empty()) {
      errors.push_back(where + ".transceivers: at least one required");
    }
    for (std::size_t t = 0; t < n.transceivers.size(); ++t) {
      const auto& tr = n.transceivers[t];
      const std::string tw = where + ".transceivers[" + std::to_string(t) + "]";
      if (!(tr.c_max_mbps > 0.0)) errors.push_back(tw + ".c_max_mbps: must be > 0");
      if (!(tr.diameter_m > 0.0)) errors.push_back(tw + ".diameter_m: must be > 0");
      if (!(tr.max_power_mw > 0.0)) errors.push_back(tw + ".max_power_mw: must be > 0");
      if (!std::isfinite(tr.sensitivity_dbm)) {
        errors.push_back(tw + ".sensitivity_dbm: must be finite");
      }
      if (tr.is_fso() && !(tr.max_beam_mrad > 0.0)) {
        errors.push_back(tw + ".max_beam_mrad: must be > 0 for FSO");
      }
    }
  }
  check_channel(channel, errors);
  check_sorted_positive(sets.powers_mw, "powers_mw", errors);
  check_sorted_positive(sets.beams_mrad, "beams_mrad", errors);
  const int n = node_count();
  for (std::size_t r = 0; r < requests.size(); ++r) {
    const auto& q = requests[r];
    const std::string where = "requests[" + std::to_string(r) + "]";
    if (q.s < 0 || q.s >= n) errors.push_back(where + ".s: unknown node");
    if (q.d < 0 || q.d >= n) errors.push_back(where + ".d: unknown node");
    if (q.s == q.d) errors.push_back(where + ": s and d must differ");
    if (q.max_hops < 1) errors.push_back(where + ".max_hops: must be >= 1");
    if (!(q.min_throughput_mbps > 0.0)) {
      errors.push_back(where + ".min_throughput_mbps: must be > 0");
    }
  }
  for (const auto& [a, b] : blocked_pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      errors.push_back("blocked_pairs: unknown node in pair");
    }
  }
  if (!errors.empty()) throw_errors(errors);
}

}  // namespace fsotopo
