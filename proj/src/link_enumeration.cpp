#include "fsotopo/link_enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "fsotopo/channel_model.hpp"

namespace fsotopo {

namespace {

auto sort_key(const LinkCandidate& c) {
  return std::make_tuple(c.from, c.to, c.tx, c.power_index, c.beam_t_index,
                         c.beam_r_index);
}

const std::vector<int> kNoCandidates;

// Angle between (b - origin) and (c - origin); zero-length vectors count as
// aligned.
double angle_between(const Position& origin, const Position& b,
                     const Position& c) {
  const double bx = b.x - origin.x, by = b.y - origin.y;
  const double cx = c.x - origin.x, cy = c.y - origin.y;
  const double nb = std::hypot(bx, by), nc = std::hypot(cx, cy);
  if (nb == 0.0 || nc == 0.0) return 0.0;
  const double cosine = std::clamp((bx * cx + by * cy) / (nb * nc), -1.0, 1.0);
  return std::acos(cosine);
}

}  // namespace

CandidateSet::CandidateSet(std::vector<LinkCandidate> candidates,
                           int node_count, int max_transceivers)
    : candidates_(std::move(candidates)), max_transceivers_(max_transceivers) {
  std::sort(candidates_.begin(), candidates_.end(),
            [](const auto& a, const auto& b) { return sort_key(a) < sort_key(b); });
  leaving_.assign(static_cast<std::size_t>(node_count * max_transceivers), {});
  candidate_link_.reserve(candidates_.size());
  for (std::size_t c = 0; c < candidates_.size(); ++c) {
    const auto& cand = candidates_[c];
    if (cand.from == cand.to) {
      throw std::invalid_argument("CandidateSet: self link");
    }
    if (c > 0 && sort_key(candidates_[c - 1]) == sort_key(cand)) {
      throw std::invalid_argument("CandidateSet: duplicate availability tuple");
    }
    const LinkKey key{cand.from, cand.to, cand.tx};
    if (links_.empty() || links_.back() != key) {
      if (!links_.empty()) link_begin_.push_back(static_cast<int>(c));
      links_.push_back(key);
    }
    candidate_link_.push_back(static_cast<int>(links_.size()) - 1);
    leaving_[static_cast<std::size_t>(cand.from * max_transceivers_ + cand.tx)]
        .push_back(static_cast<int>(c));
  }
  if (!links_.empty()) link_begin_.push_back(static_cast<int>(candidates_.size()));
}

std::optional<int> CandidateSet::find_link(const LinkKey& key) const {
  auto it = std::lower_bound(links_.begin(), links_.end(), key);
  if (it == links_.end() || *it != key) return std::nullopt;
  return static_cast<int>(it - links_.begin());
}

const std::vector<int>& CandidateSet::leaving(int from, int tx) const {
  if (tx < 0 || tx >= max_transceivers_) return kNoCandidates;
  const auto slot = static_cast<std::size_t>(from * max_transceivers_ + tx);
  if (slot >= leaving_.size()) return kNoCandidates;
  return leaving_[slot];
}

std::vector<std::pair<int, double>> shared_bandwidth(const CandidateSet& cs,
                                                     const Scenario& scenario,
                                                     int from, int tx,
                                                     BandwidthSharing mode) {
  const auto& out = cs.leaving(from, tx);
  std::vector<std::pair<int, double>> result;
  if (out.empty()) return result;
  const double c_max =
      scenario.nodes[static_cast<std::size_t>(from)].transceivers[static_cast<std::size_t>(tx)]
          .c_max_mbps;
  result.reserve(out.size());
  if (mode == BandwidthSharing::kPerTransceiverTuples) {
    const double share = c_max / static_cast<double>(out.size());
    for (int c : out) result.emplace_back(c, share);
    return result;
  }
  const auto& origin = scenario.nodes[static_cast<std::size_t>(from)].position;
  for (int c : out) {
    const auto& cand = cs[static_cast<std::size_t>(c)];
    const auto& aim = scenario.nodes[static_cast<std::size_t>(cand.to)].position;
    const double half_angle = mrad_to_rad(cand.theta_t_mrad) / 2.0;
    // Distinct receivers reachable at the same (p, theta_t) that fall inside
    // the template; theta_r does not change coverage.
    int count = 0;
    int last_receiver = -1;
    for (int o : out) {
      const auto& other = cs[static_cast<std::size_t>(o)];
      if (other.power_index != cand.power_index ||
          other.beam_t_index != cand.beam_t_index || other.to == last_receiver) {
        continue;
      }
      bool covered = true;
      if (!cand.omni()) {
        const auto& p = scenario.nodes[static_cast<std::size_t>(other.to)].position;
        covered = angle_between(origin, aim, p) <= half_angle + 1e-12;
      }
      if (covered) {
        ++count;
        last_receiver = other.to;
      }
    }
    result.emplace_back(c, c_max / static_cast<double>(std::max(count, 1)));
  }
  return result;
}

CandidateSet enumerate_candidates(const Scenario& scenario) {
  if (scenario.nodes.empty()) {
    throw std::invalid_argument("enumerate_candidates: empty node list");
  }
  if (scenario.sets.powers_mw.empty() || scenario.sets.beams_mrad.empty()) {
    throw std::invalid_argument("enumerate_candidates: empty power or beam set");
  }
  scenario.validate();
  const auto& channel = scenario.channel;
  const auto& powers = scenario.sets.powers_mw;
  const auto& beams = scenario.sets.beams_mrad;
  const int n = scenario.node_count();

  std::vector<LinkCandidate> out;
  for (int i = 0; i < n; ++i) {
    const auto& src = scenario.nodes[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto& dst = scenario.nodes[static_cast<std::size_t>(j)];
      const double d = scenario.distance(i, j);
      for (std::size_t t = 0; t < src.transceivers.size(); ++t) {
        if (t >= dst.transceivers.size()) continue;
        const auto& tx = src.transceivers[t];
        const auto& rx = dst.transceivers[t];
        if (tx.kind != rx.kind) continue;
        if (tx.is_fso() && !scenario.line_of_sight(i, j)) continue;
        const double sensitivity = dbm_to_mw(rx.sensitivity_dbm);
        for (std::size_t p = 0; p < powers.size(); ++p) {
          if (powers[p] > tx.max_power_mw * (1.0 + 1e-12)) break;
          LinkCandidate c;
          c.from = i;
          c.to = j;
          c.tx = static_cast<int>(t);
          c.power_index = static_cast<int>(p);
          c.power_mw = powers[p];
          if (!tx.is_fso()) {
            if (d > max_range(tx, powers[p], 0.0, channel, sensitivity)) continue;
            c.received_mw = received_power(tx, powers[p], d, 0.0, channel);
            c.ber = link_ber(tx.kind, c.received_mw, channel);
            out.push_back(c);
            continue;
          }
          for (std::size_t bt = 0; bt < beams.size(); ++bt) {
            if (beams[bt] > tx.max_beam_mrad * (1.0 + 1e-12)) break;
            const double theta = mrad_to_rad(beams[bt]);
            if (d > max_range(tx, powers[p], theta, channel, sensitivity)) continue;
            c.beam_t_index = static_cast<int>(bt);
            c.theta_t_mrad = beams[bt];
            c.received_mw = received_power(tx, powers[p], d, theta, channel);
            c.ber = link_ber(tx.kind, c.received_mw, channel);
            for (std::size_t br = 0; br < beams.size(); ++br) {
              if (beams[br] > rx.max_beam_mrad * (1.0 + 1e-12)) break;
              c.beam_r_index = static_cast<int>(br);
              c.theta_r_mrad = beams[br];
              out.push_back(c);
            }
          }
        }
      }
    }
  }

  CandidateSet cs(std::move(out), n, scenario.max_transceivers());
  for (int i = 0; i < n; ++i) {
    const int tcount =
        static_cast<int>(scenario.nodes[static_cast<std::size_t>(i)].transceivers.size());
    for (int t = 0; t < tcount; ++t) {
      for (const auto& [c, mbps] :
           shared_bandwidth(cs, scenario, i, t, channel.bandwidth_sharing)) {
        cs.set_bandwidth(c, mbps);
      }
    }
  }
  return cs;
}

}  // namespace fsotopo
