#include "fsotopo/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fsotopo {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

class FieldReader {
 public:
  std::vector<std::string> errors;

  const json* child(const json& obj, const char* key, const std::string& where, bool required) {
    if (!obj.is_object()) {
      errors.push_back(where + ": expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) errors.push_back(where + "." + key + ": missing");
      return nullptr;
    }
    return &*it;
  }

  double number(const json& obj, const char* key, const std::string& where, double fallback,
                bool required = false) {
    const json* v = child(obj, key, where, required);
    if (!v) return fallback;
    if (!v->is_number()) {
      errors.push_back(where + "." + key + ": expected a number");
      return fallback;
    }
    return v->get<double>();
  }

  int integer(const json& obj, const char* key, const std::string& where, int fallback,
              bool required = false) {
    const json* v = child(obj, key, where, required);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
      errors.push_back(where + "." + key + ": expected an integer");
      return fallback;
    }
    return v->get<int>();
  }

  std::vector<double> numbers(const json& obj, const char* key, std::vector<double> fallback) {
    const json* v = child(obj, key, "scenario", false);
    if (!v) return fallback;
    std::vector<double> out;
    if (!v->is_array()) {
      errors.push_back(std::string("scenario.") + key + ": expected an array of numbers");
      return fallback;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) {
        errors.push_back(std::string("scenario.") + key + "[" + std::to_string(i) +
                         "]: expected a number");
      } else {
        out.push_back((*v)[i].get<double>());
      }
    }
    return out;
  }
};

std::string kind_name(TransceiverKind k) { return k == TransceiverKind::kRf ? "rf" : "fso"; }

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return std::min(static_cast<std::size_t>(unit(rng) * static_cast<double>(n)), n - 1);
}

}  // namespace

TransceiverSpec default_transceiver(TransceiverKind kind) {
  TransceiverSpec t;
  t.kind = kind;
  if (kind == TransceiverKind::kRf) {
    t.c_max_mbps = 50.0;
    t.sensitivity_dbm = -84.0;
  }
  return t;
}

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid scenario: malformed JSON: ") + e.what());
  }
  FieldReader rd;
  Scenario s;
  if (!root.is_object()) throw std::invalid_argument("invalid scenario: top level must be an object");

  if (const json* nodes = rd.child(root, "nodes", "scenario", true)) {
    if (!nodes->is_array()) {
      rd.errors.push_back("scenario.nodes: expected an array");
    } else {
      for (std::size_t i = 0; i < nodes->size(); ++i) {
        const auto& jn = (*nodes)[i];
        const std::string where = "nodes[" + std::to_string(i) + "]";
        NodeSpec n;
        n.id = rd.integer(jn, "id", where, static_cast<int>(i), true);
        n.position.x = rd.number(jn, "x", where, 0.0, true);
        n.position.y = rd.number(jn, "y", where, 0.0, true);
        const json* trs = rd.child(jn, "transceivers", where, true);
        if (trs && !trs->is_array()) rd.errors.push_back(where + ".transceivers: expected an array");
        if (trs && trs->is_array()) {
          for (std::size_t t = 0; t < trs->size(); ++t) {
            const auto& jt = (*trs)[t];
            const std::string tw = where + ".transceivers[" + std::to_string(t) + "]";
            auto kind = TransceiverKind::kFso;
            if (const json* k = rd.child(jt, "kind", tw, true)) {
              const std::string name = k->is_string() ? k->get<std::string>() : "";
              if (name == "rf" || name == "RF") {
                kind = TransceiverKind::kRf;
              } else if (name != "fso" && name != "FSO") {
                rd.errors.push_back(tw + ".kind: expected \"rf\" or \"fso\"");
              }
            }
            auto spec = default_transceiver(kind);
            spec.c_max_mbps = rd.number(jt, "c_max_mbps", tw, spec.c_max_mbps);
            spec.sensitivity_dbm = rd.number(jt, "sensitivity_dbm", tw, spec.sensitivity_dbm);
            spec.diameter_m = rd.number(jt, "diameter_m", tw, spec.diameter_m);
            spec.max_beam_mrad = rd.number(jt, "max_beam_mrad", tw, spec.max_beam_mrad);
            spec.max_power_mw = rd.number(jt, "max_power_mw", tw, spec.max_power_mw);
            n.transceivers.push_back(spec);
          }
        }
        s.nodes.push_back(std::move(n));
      }
    }
  }
  s.sets.powers_mw = rd.numbers(root, "powers_mw", {5.0, 10.0, 15.0, 20.0});
  s.sets.beams_mrad = rd.numbers(root, "beams_mrad", {80.0, 160.0, 240.0});

  auto node_index = [&](int id, const std::string& where) {
    const int idx = s.index_of(id);
    if (idx < 0) rd.errors.push_back(where + ": unknown node id " + std::to_string(id));
    return idx;
  };
  if (const json* reqs = rd.child(root, "requests", "scenario", false)) {
    if (!reqs->is_array()) rd.errors.push_back("scenario.requests: expected an array");
    for (std::size_t r = 0; reqs->is_array() && r < reqs->size(); ++r) {
      const auto& jr = (*reqs)[r];
      const std::string where = "requests[" + std::to_string(r) + "]";
      QosRequest q;
      const int sid = rd.integer(jr, "s", where, 0, true);
      const int did = rd.integer(jr, "d", where, 0, true);
      q.max_hops = rd.integer(jr, "max_hops", where, 1, true);
      q.min_throughput_mbps = rd.number(jr, "min_throughput_mbps", where, 1.0, true);
      if (jr.is_object() && jr.contains("s") && jr.contains("d")) {
        q.s = node_index(sid, where + ".s");
        q.d = node_index(did, where + ".d");
      }
      s.requests.push_back(q);
    }
  }
  if (const json* blocked = rd.child(root, "blocked_pairs", "scenario", false)) {
    for (std::size_t b = 0; blocked->is_array() && b < blocked->size(); ++b) {
      const auto& pair = (*blocked)[b];
      const std::string where = "blocked_pairs[" + std::to_string(b) + "]";
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number_integer()) {
        rd.errors.push_back(where + ": expected [id, id]");
        continue;
      }
      const int a = node_index(pair[0].get<int>(), where);
      const int c = node_index(pair[1].get<int>(), where);
      if (a >= 0 && c >= 0) s.blocked_pairs.insert({std::min(a, c), std::max(a, c)});
    }
    if (!blocked->is_array()) rd.errors.push_back("scenario.blocked_pairs: expected an array");
  }
  if (const json* ch = rd.child(root, "channel", "scenario", false)) {
    auto& c = s.channel;
    const std::string where = "channel";
    c.p_noise_rf_mw = rd.number(*ch, "p_noise_rf_mw", where, c.p_noise_rf_mw);
    c.p_noise_fso_mw = rd.number(*ch, "p_noise_fso_mw", where, c.p_noise_fso_mw);
    c.responsivity = rd.number(*ch, "responsivity", where, c.responsivity);
    c.rf_pathloss_exponent = rd.number(*ch, "rf_pathloss_exponent", where, c.rf_pathloss_exponent);
    c.rf_reference_gain = rd.number(*ch, "rf_reference_gain", where, c.rf_reference_gain);
    c.range_cap_m = rd.number(*ch, "range_cap_m", where, c.range_cap_m);
    if (const json* m = rd.child(*ch, "ber_mode", where, false)) {
      if (*m == "monotone") {
        c.ber_mode = BerMode::kMonotone;
      } else if (*m == "literal") {
        c.ber_mode = BerMode::kLiteral;
      } else {
        rd.errors.push_back("channel.ber_mode: expected \"monotone\" or \"literal\"");
      }
    }
    if (const json* m = rd.child(*ch, "bandwidth_sharing", where, false)) {
      if (*m == "coverage") {
        c.bandwidth_sharing = BandwidthSharing::kCoverageTemplate;
      } else if (*m == "per_tuple") {
        c.bandwidth_sharing = BandwidthSharing::kPerTransceiverTuples;
      } else {
        rd.errors.push_back("channel.bandwidth_sharing: expected \"coverage\" or \"per_tuple\"");
      }
    }
  }
  if (const json* area = rd.child(root, "area", "scenario", false)) {
    s.area.width_m = rd.number(*area, "width_m", "area", 0.0);
    s.area.height_m = rd.number(*area, "height_m", "area", 0.0);
  }
  if (const json* seed = rd.child(root, "seed", "scenario", false)) {
    if (seed->is_number_unsigned()) {
      s.seed = seed->get<std::uint64_t>();
    } else {
      rd.errors.push_back("scenario.seed: expected a non-negative integer");
    }
  }

  if (!rd.errors.empty()) {
    std::ostringstream out;
    out << "invalid scenario:";
    for (const auto& e : rd.errors) out << "\n  " << e;
    throw std::invalid_argument(out.str());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_scenario: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json root;
  root["nodes"] = ordered_json::array();
  for (const auto& n : s.nodes) {
    ordered_json jn;
    jn["id"] = n.id;
    jn["x"] = n.position.x;
    jn["y"] = n.position.y;
    jn["transceivers"] = ordered_json::array();
    for (const auto& t : n.transceivers) {
      ordered_json jt;
      jt["kind"] = kind_name(t.kind);
      jt["c_max_mbps"] = t.c_max_mbps;
      jt["sensitivity_dbm"] = t.sensitivity_dbm;
      jt["diameter_m"] = t.diameter_m;
      jt["max_beam_mrad"] = t.max_beam_mrad;
      jt["max_power_mw"] = t.max_power_mw;
      jn["transceivers"].push_back(jt);
    }
    root["nodes"].push_back(jn);
  }
  root["powers_mw"] = s.sets.powers_mw;
  root["beams_mrad"] = s.sets.beams_mrad;
  auto id = [&](int index) { return s.nodes[static_cast<std::size_t>(index)].id; };
  root["requests"] = ordered_json::array();
  for (const auto& q : s.requests) {
    ordered_json jr;
    jr["s"] = id(q.s);
    jr["d"] = id(q.d);
    jr["max_hops"] = q.max_hops;
    jr["min_throughput_mbps"] = q.min_throughput_mbps;
    root["requests"].push_back(jr);
  }
  root["blocked_pairs"] = ordered_json::array();
  for (const auto& [a, b] : s.blocked_pairs) root["blocked_pairs"].push_back({id(a), id(b)});
  const auto& c = s.channel;
  ordered_json ch;
  ch["p_noise_rf_mw"] = c.p_noise_rf_mw;
  ch["p_noise_fso_mw"] = c.p_noise_fso_mw;
  ch["responsivity"] = c.responsivity;
  ch["ber_mode"] = c.ber_mode == BerMode::kMonotone ? "monotone" : "literal";
  ch["rf_pathloss_exponent"] = c.rf_pathloss_exponent;
  ch["rf_reference_gain"] = c.rf_reference_gain;
  ch["range_cap_m"] = c.range_cap_m;
  ch["bandwidth_sharing"] =
      c.bandwidth_sharing == BandwidthSharing::kCoverageTemplate ? "coverage" : "per_tuple";
  root["channel"] = ch;
  root["area"] = {{"width_m", s.area.width_m}, {"height_m", s.area.height_m}};
  root["seed"] = s.seed;
  return root.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_scenario: cannot open " + path);
  out << scenario_to_json(scenario);
  if (!out) throw std::runtime_error("save_scenario: write failed for " + path);
}

Scenario generate_scenario(const GenerateParams& p) {
  if (p.nodes < 2) throw std::invalid_argument("generate_scenario: need at least 2 nodes");
  const auto pairs = static_cast<std::int64_t>(p.nodes) * (p.nodes - 1);
  if (p.requests < 0 || p.requests > pairs) {
    throw std::invalid_argument("generate_scenario: " + std::to_string(p.requests) +
                                " requests exceed the " + std::to_string(pairs) +
                                " ordered node pairs");
  }
  if (p.transceivers < 1) throw std::invalid_argument("generate_scenario: need a transceiver");
  if (p.hop_choices.empty() || p.throughput_choices.empty()) {
    throw std::invalid_argument("generate_scenario: empty QoS choice list");
  }
  Scenario s;
  s.area = p.area;
  s.seed = p.seed;
  s.sets = p.sets;
  s.channel = p.channel;
  std::mt19937_64 rng(p.seed);
  std::vector<TransceiverSpec> layout{default_transceiver(TransceiverKind::kRf)};
  for (int t = 1; t < p.transceivers; ++t) layout.push_back(default_transceiver(TransceiverKind::kFso));
  for (int i = 0; i < p.nodes; ++i) {
    NodeSpec n;
    n.id = i + 1;
    n.position.x = unit(rng) * p.area.width_m;
    n.position.y = unit(rng) * p.area.height_m;
    n.transceivers = layout;
    s.nodes.push_back(std::move(n));
  }
  // Line-of-sight draws, one per unordered pair, always consumed.
  for (int a = 0; a < p.nodes; ++a) {
    for (int b = a + 1; b < p.nodes; ++b) {
      if (unit(rng) < p.blocked_fraction) s.blocked_pairs.insert({a, b});
    }
  }
  std::vector<std::pair<int, int>> ordered;
  for (int a = 0; a < p.nodes; ++a) {
    for (int b = 0; b < p.nodes; ++b) {
      if (a != b) ordered.emplace_back(a, b);
    }
  }
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto j = i + below(rng, ordered.size() - i);
    std::swap(ordered[i], ordered[j]);
  }
  for (int r = 0; r < p.requests; ++r) {
    QosRequest q;
    q.s = ordered[static_cast<std::size_t>(r)].first;
    q.d = ordered[static_cast<std::size_t>(r)].second;
    q.max_hops = p.hop_choices[below(rng, p.hop_choices.size())];
    q.min_throughput_mbps = p.throughput_choices[below(rng, p.throughput_choices.size())];
    s.requests.push_back(q);
  }
  s.validate();
  return s;
}

Scenario reference_scenario() {
  Scenario s;
  const std::vector<Position> where{{0.0, 0.0}, {10.0, -2.0}, {4.0, -9.0},
                                    {14.0, -12.0}, {12.0, 6.0}};
  std::vector<TransceiverSpec> layout{default_transceiver(TransceiverKind::kRf)};
  for (int t = 0; t < 3; ++t) layout.push_back(default_transceiver(TransceiverKind::kFso));
  for (std::size_t i = 0; i < where.size(); ++i) {
    NodeSpec n;
    n.id = static_cast<int>(i) + 1;
    n.position = where[i];
    n.transceivers = layout;
    s.nodes.push_back(std::move(n));
  }
  s.sets.powers_mw = {5.0, 10.0};
  s.sets.beams_mrad = {80.0, 160.0, 240.0};
  // (s, d, throughput Mbps, hop bound), ids 1..5.
  const struct { int s, d; double th; int h; } rows[] = {
      {1, 2, 5, 1}, {1, 5, 5, 1}, {2, 4, 100, 2}, {2, 5, 100, 1},
      {3, 1, 250, 1}, {4, 3, 5, 1}, {4, 2, 5, 2}, {5, 4, 100, 1}};
  for (const auto& r : rows) s.requests.push_back({r.s - 1, r.d - 1, r.h, r.th});
  s.area = {20.0, 20.0};
  s.validate();
  return s;
}

}  // namespace fsotopo
