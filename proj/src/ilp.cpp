#include "fsotopo/ilp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace fsotopo {

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename T>
std::uint64_t mix(std::uint64_t h, const T& value) {
  return fnv1a(h, &value, sizeof(T));
}

std::string scenario_digest(const Scenario& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& n : s.nodes) {
    h = mix(h, n.id);
    h = mix(h, n.position.x);
    h = mix(h, n.position.y);
    for (const auto& t : n.transceivers) {
      h = mix(h, static_cast<int>(t.kind));
      h = mix(h, t.c_max_mbps);
      h = mix(h, t.sensitivity_dbm);
      h = mix(h, t.diameter_m);
      h = mix(h, t.max_beam_mrad);
      h = mix(h, t.max_power_mw);
    }
  }
  for (double p : s.sets.powers_mw) h = mix(h, p);
  for (double b : s.sets.beams_mrad) h = mix(h, b);
  for (const auto& [a, b] : s.blocked_pairs) {
    h = mix(h, a);
    h = mix(h, b);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string join_ids(std::initializer_list<int> ids) {
  std::string out;
  for (int v : ids) {
    out += '_';
    out += std::to_string(v);
  }
  return out;
}

}  // namespace

std::string_view class_label(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::kRouteFlow: return "route_flow";
    case ConstraintClass::kRouteLink: return "route_link";
    case ConstraintClass::kDelay: return "delay";
    case ConstraintClass::kThroughput: return "throughput";
    case ConstraintClass::kPowerUpper: return "power_ub";
    case ConstraintClass::kPowerLower: return "power_lb";
    case ConstraintClass::kSelectFsoOut: return "select_fso_out";
    case ConstraintClass::kSelectFsoIn: return "select_fso_in";
    case ConstraintClass::kSelectRf: return "select_rf";
    case ConstraintClass::kBeam: return "beam";
    case ConstraintClass::kAlignA: return "align_a";
    case ConstraintClass::kAlignB: return "align_b";
  }
  return "unknown";
}

std::array<std::size_t, kConstraintClassCount> IlpInstance::class_counts() const {
  std::array<std::size_t, kConstraintClassCount> counts{};
  for (const auto& c : constraints) ++counts[static_cast<std::size_t>(c.tag)];
  return counts;
}

int IlpInstance::power_var(int node, int tx, int power_index) const {
  if (tx < 0 || tx >= max_transceivers || node < 0 || node >= node_count) return -1;
  const auto slot = static_cast<std::size_t>(node * max_transceivers + tx);
  if (power_index < 0 || power_index >= power_levels[slot]) return -1;
  return power_base[slot] + power_index;
}

std::string variable_name(const IlpVariable& v) {
  switch (v.kind) {
    case VarKind::kPower:
      return "x" + join_ids({v.node, v.tx, v.power_index});
    case VarKind::kSelect:
      return "g" + join_ids({v.node, v.to, v.tx}) + "_c" + std::to_string(v.candidate);
    case VarKind::kRoute:
      return "l" + join_ids({v.node, v.to, v.tx}) + "_r" + std::to_string(v.request);
  }
  return "v" + std::to_string(v.id);
}

IlpInstance build_instance(const Scenario& scenario, const CandidateSet& cs,
                           const std::vector<QosRequest>& requests,
                           const BuildOptions& options) {
  if (!requests.empty() && cs.empty()) {
    throw std::invalid_argument("build_instance: requests given but no candidates");
  }
  const int n = scenario.node_count();
  const int max_t = scenario.max_transceivers();
  const auto& links = cs.links();
  const int link_count = static_cast<int>(links.size());
  const int request_count = static_cast<int>(requests.size());

  IlpInstance inst;
  inst.node_count = n;
  inst.requests = requests;
  inst.scenario_digest = scenario_digest(scenario);
  inst.max_transceivers = max_t;
  for (const auto& node : scenario.nodes) {
    inst.transceiver_counts.push_back(static_cast<int>(node.transceivers.size()));
  }

  auto add_var = [&](IlpVariable v, double cost) {
    v.id = static_cast<int>(inst.variables.size());
    inst.variables.push_back(v);
    inst.objective.push_back(cost);
    return v.id;
  };

  // Route variables first, then selections, then powers. Branch-and-bound
  // follows id order, so this ordering is also its branching order.
  std::vector<int> route_var(static_cast<std::size_t>(request_count * link_count));
  for (int r = 0; r < request_count; ++r) {
    for (int l = 0; l < link_count; ++l) {
      IlpVariable v;
      v.kind = VarKind::kRoute;
      v.node = links[static_cast<std::size_t>(l)].from;
      v.to = links[static_cast<std::size_t>(l)].to;
      v.tx = links[static_cast<std::size_t>(l)].tx;
      v.link = l;
      v.request = r;
      route_var[static_cast<std::size_t>(r * link_count + l)] = add_var(v, 0.0);
    }
  }
  // Within a link the highest setting gets the lowest id, so a zero-first
  // search settles on the cheapest candidate first.
  std::vector<int> gvar(cs.size(), -1);
  for (int l = 0; l < link_count; ++l) {
    auto [b, e] = cs.link_range(l);
    for (int c = e - 1; c >= b; --c) {
      const auto& cand = cs[static_cast<std::size_t>(c)];
      IlpVariable v;
      v.kind = VarKind::kSelect;
      v.node = cand.from;
      v.to = cand.to;
      v.tx = cand.tx;
      v.power_index = cand.power_index;
      v.candidate = c;
      v.link = l;
      gvar[static_cast<std::size_t>(c)] = add_var(v, 0.0);
    }
  }
  const auto& powers = scenario.sets.powers_mw;
  inst.power_base.assign(static_cast<std::size_t>(n * max_t), -1);
  inst.power_levels.assign(static_cast<std::size_t>(n * max_t), 0);
  for (int i = 0; i < n; ++i) {
    const auto& node = scenario.nodes[static_cast<std::size_t>(i)];
    for (int t = 0; t < static_cast<int>(node.transceivers.size()); ++t) {
      const auto slot = static_cast<std::size_t>(i * max_t + t);
      inst.power_base[slot] = static_cast<int>(inst.variables.size());
      for (int p = 0; p < static_cast<int>(powers.size()); ++p) {
        if (powers[static_cast<std::size_t>(p)] >
            node.transceivers[static_cast<std::size_t>(t)].max_power_mw * (1.0 + 1e-12)) {
          break;
        }
        IlpVariable v;
        v.kind = VarKind::kPower;
        v.node = i;
        v.tx = t;
        v.power_index = p;
        add_var(v, powers[static_cast<std::size_t>(p)]);
        ++inst.power_levels[slot];
      }
    }
  }

  auto& rows = inst.constraints;
  auto add_row = [&](ConstraintClass tag, Sense sense, double rhs,
                     std::vector<Term> terms, std::string name, int request = -1) {
    LinearConstraint c;
    c.tag = tag;
    c.sense = sense;
    c.rhs = rhs;
    c.terms = std::move(terms);
    c.name = std::move(name);
    c.request = request;
    rows.push_back(std::move(c));
  };

  // Flow conservation.
  for (int r = 0; r < request_count; ++r) {
    const auto& q = requests[static_cast<std::size_t>(r)];
    std::vector<std::vector<Term>> per_node(static_cast<std::size_t>(n));
    for (int l = 0; l < link_count; ++l) {
      const int v = route_var[static_cast<std::size_t>(r * link_count + l)];
      per_node[static_cast<std::size_t>(links[static_cast<std::size_t>(l)].from)].push_back({v, 1.0});
      per_node[static_cast<std::size_t>(links[static_cast<std::size_t>(l)].to)].push_back({v, -1.0});
    }
    for (int i = 0; i < n; ++i) {
      auto& terms = per_node[static_cast<std::size_t>(i)];
      std::sort(terms.begin(), terms.end(),
                [](const Term& a, const Term& b) { return a.var < b.var; });
      const double rhs = i == q.s ? 1.0 : (i == q.d ? -1.0 : 0.0);
      add_row(ConstraintClass::kRouteFlow, Sense::kEq, rhs, std::move(terms),
              "flow_n" + std::to_string(i) + "_r" + std::to_string(r), r);
    }
  }
  // A route may only use a link with a selected candidate.
  for (int r = 0; r < request_count; ++r) {
    for (int l = 0; l < link_count; ++l) {
      std::vector<Term> terms{{route_var[static_cast<std::size_t>(r * link_count + l)], 1.0}};
      auto [b, e] = cs.link_range(l);
      for (int c = e - 1; c >= b; --c) terms.push_back({gvar[static_cast<std::size_t>(c)], -1.0});
      const auto& k = links[static_cast<std::size_t>(l)];
      add_row(ConstraintClass::kRouteLink, Sense::kLe, 0.0, std::move(terms),
              "link" + join_ids({k.from, k.to, k.tx}) + "_r" + std::to_string(r), r);
    }
  }
  // Hop-count delay bound.
  for (int r = 0; r < request_count; ++r) {
    std::vector<Term> terms;
    for (int l = 0; l < link_count; ++l) {
      terms.push_back({route_var[static_cast<std::size_t>(r * link_count + l)], 1.0});
    }
    add_row(ConstraintClass::kDelay, Sense::kLe,
            requests[static_cast<std::size_t>(r)].max_hops, std::move(terms),
            "delay_r" + std::to_string(r), r);
  }
  // Throughput carried by a link within its BER-adjusted bandwidth.
  if (request_count > 0) {
    for (int l = 0; l < link_count; ++l) {
      std::vector<Term> terms;
      for (int r = 0; r < request_count; ++r) {
        terms.push_back({route_var[static_cast<std::size_t>(r * link_count + l)],
                         requests[static_cast<std::size_t>(r)].min_throughput_mbps});
      }
      auto [b, e] = cs.link_range(l);
      for (int c = e - 1; c >= b; --c) {
        terms.push_back({gvar[static_cast<std::size_t>(c)],
                         -cs[static_cast<std::size_t>(c)].capacity_mbps()});
      }
      const auto& k = links[static_cast<std::size_t>(l)];
      add_row(ConstraintClass::kThroughput, Sense::kLe, 0.0, std::move(terms),
              "thr" + join_ids({k.from, k.to, k.tx}));
    }
  }
  // Power indicators.
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < inst.transceiver_counts[static_cast<std::size_t>(i)]; ++t) {
      const auto& out = cs.leaving(i, t);
      const int levels = inst.power_levels[static_cast<std::size_t>(i * max_t + t)];
      for (int p = 0; p < levels; ++p) {
        std::vector<Term> gterms;
        for (int c : out) {
          if (cs[static_cast<std::size_t>(c)].power_index == p) {
            gterms.push_back({gvar[static_cast<std::size_t>(c)], 1.0});
          }
        }
        std::sort(gterms.begin(), gterms.end(),
                  [](const Term& a, const Term& b) { return a.var < b.var; });
        const int x = inst.power_var(i, t, p);
        const double big_m = options.tighten_big_m
                                 ? std::max<double>(1.0, static_cast<double>(gterms.size()))
                                 : static_cast<double>(n);
        auto upper = gterms;
        upper.push_back({x, -big_m});
        const std::string suffix = join_ids({i, t, p});
        add_row(ConstraintClass::kPowerUpper, Sense::kLe, 0.0, std::move(upper),
                "pub" + suffix);
        std::vector<Term> lower{{x, 1.0}};
        for (const auto& g : gterms) lower.push_back({g.var, -1.0});
        add_row(ConstraintClass::kPowerLower, Sense::kLe, 0.0, std::move(lower),
                "plb" + suffix);
      }
    }
  }
  // Incoming candidates per (node, tx), used by the FSO selector, beam and alignment rows.
  std::vector<std::vector<int>> incoming(static_cast<std::size_t>(n * max_t));
  for (std::size_t c = 0; c < cs.size(); ++c) {
    incoming[static_cast<std::size_t>(cs[c].to * max_t + cs[c].tx)].push_back(static_cast<int>(c));
  }
  auto g_terms = [&](const std::vector<int>& cands) {
    std::vector<Term> terms;
    terms.reserve(cands.size());
    for (int c : cands) terms.push_back({gvar[static_cast<std::size_t>(c)], 1.0});
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    return terms;
  };
  // FSO selectors, then RF selectors.
  for (int i = 0; i < n; ++i) {
    const auto& node = scenario.nodes[static_cast<std::size_t>(i)];
    for (int t = 0; t < static_cast<int>(node.transceivers.size()); ++t) {
      if (!node.transceivers[static_cast<std::size_t>(t)].is_fso()) continue;
      const auto& out = cs.leaving(i, t);
      if (!out.empty()) {
        add_row(ConstraintClass::kSelectFsoOut, Sense::kLe, 1.0, g_terms(out),
                "selout" + join_ids({i, t}));
      }
      const auto& in = incoming[static_cast<std::size_t>(i * max_t + t)];
      if (!in.empty()) {
        add_row(ConstraintClass::kSelectFsoIn, Sense::kLe, 1.0, g_terms(in),
                "selin" + join_ids({i, t}));
      }
    }
  }
  for (int l = 0; l < link_count; ++l) {
    auto [b, e] = cs.link_range(l);
    if (!cs[static_cast<std::size_t>(b)].omni()) continue;
    std::vector<int> cands;
    for (int c = b; c < e; ++c) cands.push_back(c);
    const auto& k = links[static_cast<std::size_t>(l)];
    add_row(ConstraintClass::kSelectRf, Sense::kLe, 1.0, g_terms(cands),
            "selrf" + join_ids({k.from, k.to, k.tx}));
  }
  // Beam consistency and alignment on FSO transceivers.
  const int beam_count = static_cast<int>(scenario.sets.beams_mrad.size());
  auto receive_mismatch = [&](int node, int t, int beam) {
    std::vector<int> out;
    for (int c : incoming[static_cast<std::size_t>(node * max_t + t)]) {
      if (cs[static_cast<std::size_t>(c)].beam_r_index != beam) out.push_back(c);
    }
    return out;
  };
  auto merged = [&](const std::vector<int>& a, const std::vector<int>& b) {
    auto terms = g_terms(a);
    auto more = g_terms(b);
    terms.insert(terms.end(), more.begin(), more.end());
    return terms;
  };
  for (int l = 0; l < link_count; ++l) {
    auto [b, e] = cs.link_range(l);
    if (cs[static_cast<std::size_t>(b)].omni()) continue;
    const auto& k = links[static_cast<std::size_t>(l)];
    for (int a = 0; a < beam_count; ++a) {
      std::vector<int> sending;
      for (int c = b; c < e; ++c) {
        if (cs[static_cast<std::size_t>(c)].beam_t_index == a) sending.push_back(c);
      }
      if (sending.empty()) continue;
      // Beam: the reverse link j -> i on the same transceiver.
      std::vector<int> reverse;
      if (auto rl = cs.find_link({k.to, k.from, k.tx})) {
        auto [rb, re] = cs.link_range(*rl);
        for (int c = rb; c < re; ++c) {
          if (cs[static_cast<std::size_t>(c)].beam_r_index != a) reverse.push_back(c);
        }
      }
      const std::string suffix = join_ids({k.from, k.to, k.tx, a});
      if (!reverse.empty()) {
        add_row(ConstraintClass::kBeam, Sense::kLe, 1.0, merged(sending, reverse),
                "beam" + suffix);
      }
      // Alignment: anything received at i on t.
      auto at_source = receive_mismatch(k.from, k.tx, a);
      if (!at_source.empty()) {
        add_row(ConstraintClass::kAlignA, Sense::kLe, 1.0, merged(sending, at_source),
                "aligna" + suffix);
      }
      // Sector: anything received on t at a third node in sight of both ends.
      for (int third = 0; third < n; ++third) {
        if (third == k.from || third == k.to) continue;
        if (!scenario.line_of_sight(third, k.from) || !scenario.line_of_sight(third, k.to)) {
          continue;
        }
        auto at_third = receive_mismatch(third, k.tx, a);
        if (at_third.empty()) continue;
        add_row(ConstraintClass::kAlignB, Sense::kLe, 1.0, merged(sending, at_third),
                "alignb" + join_ids({k.from, k.to, third, k.tx, a}));
      }
    }
  }
  return inst;
}

std::int64_t count_variables(std::int64_t n, std::int64_t sd, std::int64_t t,
                             std::int64_t p, std::int64_t phi) {
  return n * ((n - 1) * (sd * t + p * (1 + t * phi * phi)) + t * p);
}

std::int64_t count_constraints(std::int64_t n, std::int64_t sd, std::int64_t t,
                               std::int64_t p, std::int64_t phi) {
  return n * (n - 1) * (t * sd + 2 * t + (t - 1) * phi) +
         n * (sd + 2 * p * t + 2 * (t - 1)) + sd;
}

double row_violation(const LinearConstraint& row, double activity, double tolerance) {
  double miss = 0.0;
  switch (row.sense) {
    case Sense::kLe: miss = activity - row.rhs; break;
    case Sense::kGe: miss = row.rhs - activity; break;
    case Sense::kEq: miss = std::abs(activity - row.rhs); break;
  }
  return miss > tolerance ? miss : 0.0;
}

FeasibilityReport check_feasible(const IlpInstance& inst,
                                 std::span<const std::uint8_t> assignment,
                                 const CheckOptions& options) {
  if (assignment.size() != inst.variables.size()) {
    throw std::invalid_argument("check_feasible: assignment has " +
                                std::to_string(assignment.size()) + " entries, instance has " +
                                std::to_string(inst.variables.size()) + " variables");
  }
  FeasibilityReport report;
  report.objective = inst.objective_offset;
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v]) report.objective += inst.objective[v];
  }
  for (std::size_t r = 0; r < inst.constraints.size(); ++r) {
    const auto& row = inst.constraints[r];
    if (row.request >= 0 &&
        std::find(options.skip_requests.begin(), options.skip_requests.end(), row.request) !=
            options.skip_requests.end()) {
      continue;
    }
    double lhs = 0.0;
    for (const auto& term : row.terms) {
      if (assignment[static_cast<std::size_t>(term.var)]) lhs += term.coef;
    }
    if (row_violation(row, lhs, options.tolerance) > 0.0) {
      double slack = 0.0;
      switch (row.sense) {
        case Sense::kLe: slack = row.rhs - lhs; break;
        case Sense::kGe: slack = lhs - row.rhs; break;
        case Sense::kEq: slack = -std::abs(lhs - row.rhs); break;
      }
      report.violations.push_back({static_cast<int>(r), lhs, slack});
    }
  }
  return report;
}

ColumnIndex::ColumnIndex(const IlpInstance& inst) {
  begin.assign(inst.variables.size() + 1, 0);
  for (const auto& row : inst.constraints) {
    for (const auto& t : row.terms) ++begin[static_cast<std::size_t>(t.var) + 1];
  }
  for (std::size_t v = 0; v < inst.variables.size(); ++v) begin[v + 1] += begin[v];
  rows.resize(static_cast<std::size_t>(begin.back()));
  coefs.resize(rows.size());
  std::vector<int> fill(begin.begin(), begin.end() - 1);
  for (std::size_t r = 0; r < inst.constraints.size(); ++r) {
    for (const auto& t : inst.constraints[r].terms) {
      const auto pos = static_cast<std::size_t>(fill[static_cast<std::size_t>(t.var)]++);
      rows[pos] = static_cast<int>(r);
      coefs[pos] = t.coef;
    }
  }
}

std::vector<double> row_activities(const IlpInstance& inst, const ColumnIndex& columns,
                                   std::span<const std::uint8_t> assignment) {
  std::vector<double> activity(inst.constraints.size(), 0.0);
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (!assignment[v]) continue;
    for (int k = columns.begin[v]; k < columns.begin[v + 1]; ++k) {
      activity[static_cast<std::size_t>(columns.rows[static_cast<std::size_t>(k)])] +=
          columns.coefs[static_cast<std::size_t>(k)];
    }
  }
  return activity;
}

SparseChecker::SparseChecker(const IlpInstance& inst)
    : inst_(&inst),
      columns_(inst),
      activity_(inst.constraints.size(), 0.0),
      touched_(inst.constraints.size(), 0) {
  for (std::size_t r = 0; r < inst.constraints.size(); ++r) {
    if (row_violation(inst.constraints[r], 0.0) > 0.0) {
      zero_violated_.push_back(static_cast<int>(r));
    }
  }
}

FeasibilityReport SparseChecker::check(const std::vector<int>& ones,
                                       const CheckOptions& options) const {
  const auto& inst = *inst_;
  FeasibilityReport report;
  report.objective = inst.objective_offset;
  touched_rows_.clear();
  for (int v : ones) {
    const auto vi = static_cast<std::size_t>(v);
    report.objective += inst.objective[vi];
    for (int k = columns_.begin[vi]; k < columns_.begin[vi + 1]; ++k) {
      const auto r = static_cast<std::size_t>(columns_.rows[static_cast<std::size_t>(k)]);
      if (!touched_[r]) {
        touched_[r] = 1;
        touched_rows_.push_back(static_cast<int>(r));
      }
      activity_[r] += columns_.coefs[static_cast<std::size_t>(k)];
    }
  }
  for (int r : zero_violated_) {
    if (!touched_[static_cast<std::size_t>(r)]) {
      touched_[static_cast<std::size_t>(r)] = 1;
      touched_rows_.push_back(r);
    }
  }
  std::sort(touched_rows_.begin(), touched_rows_.end());
  for (int r : touched_rows_) {
    const auto ri = static_cast<std::size_t>(r);
    const auto& row = inst.constraints[ri];
    const double lhs = activity_[ri];
    activity_[ri] = 0.0;
    touched_[ri] = 0;
    if (row.request >= 0 &&
        std::find(options.skip_requests.begin(), options.skip_requests.end(), row.request) !=
            options.skip_requests.end()) {
      continue;
    }
    if (row_violation(row, lhs, options.tolerance) > 0.0) {
      double slack = 0.0;
      switch (row.sense) {
        case Sense::kLe: slack = row.rhs - lhs; break;
        case Sense::kGe: slack = lhs - row.rhs; break;
        case Sense::kEq: slack = -std::abs(lhs - row.rhs); break;
      }
      report.violations.push_back({r, lhs, slack});
    }
  }
  return report;
}

Admission admit_requests(const IlpInstance& inst, std::span<const std::uint8_t> assignment,
                         const std::vector<int>& order) {
  if (assignment.size() != inst.variables.size()) {
    throw std::invalid_argument("admit_requests: assignment length mismatch");
  }
  const int requests = static_cast<int>(inst.requests.size());
  int link_count = 0;
  for (const auto& v : inst.variables) {
    if (v.kind != VarKind::kPower) link_count = std::max(link_count, v.link + 1);
  }
  std::vector<std::vector<int>> route_of(static_cast<std::size_t>(requests));
  std::vector<std::vector<int>> selected_on(static_cast<std::size_t>(link_count));
  for (const auto& v : inst.variables) {
    if (!assignment[static_cast<std::size_t>(v.id)]) continue;
    if (v.kind == VarKind::kRoute) route_of[static_cast<std::size_t>(v.request)].push_back(v.id);
    if (v.kind == VarKind::kSelect) selected_on[static_cast<std::size_t>(v.link)].push_back(v.id);
  }
  const SparseChecker checker(inst);
  Admission out;
  out.admitted.assign(static_cast<std::size_t>(requests), 0);

  auto topology = [&](const std::vector<std::uint8_t>& chosen) {
    std::vector<int> ones;
    std::vector<std::uint8_t> link_used(static_cast<std::size_t>(link_count), 0);
    for (int r = 0; r < requests; ++r) {
      if (!chosen[static_cast<std::size_t>(r)]) continue;
      for (int v : route_of[static_cast<std::size_t>(r)]) {
        ones.push_back(v);
        link_used[static_cast<std::size_t>(inst.variables[static_cast<std::size_t>(v)].link)] = 1;
      }
    }
    std::vector<int> powers;
    for (int l = 0; l < link_count; ++l) {
      if (!link_used[static_cast<std::size_t>(l)]) continue;
      for (int g : selected_on[static_cast<std::size_t>(l)]) {
        ones.push_back(g);
        const auto& v = inst.variables[static_cast<std::size_t>(g)];
        powers.push_back(inst.power_var(v.node, v.tx, v.power_index));
      }
    }
    std::sort(powers.begin(), powers.end());
    powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
    for (int x : powers) {
      if (x >= 0) ones.push_back(x);
    }
    return ones;
  };
  auto rejected = [&](const std::vector<std::uint8_t>& chosen) {
    std::vector<int> skip;
    for (int r = 0; r < requests; ++r) {
      if (!chosen[static_cast<std::size_t>(r)]) skip.push_back(r);
    }
    return skip;
  };

  for (int r : order) {
    auto trial = out.admitted;
    trial[static_cast<std::size_t>(r)] = 1;
    CheckOptions opt;
    opt.skip_requests = rejected(trial);
    if (checker.check(topology(trial), opt).feasible()) out.admitted = trial;
  }
  CheckOptions opt;
  opt.skip_requests = rejected(out.admitted);
  const auto ones = topology(out.admitted);
  out.assignment.assign(inst.variables.size(), 0);
  for (int v : ones) out.assignment[static_cast<std::size_t>(v)] = 1;
  out.objective = checker.check(ones, opt).objective;
  return out;
}

void export_lp(const IlpInstance& inst, std::ostream& out) {
  auto write_terms = [&](const std::vector<Term>& terms) {
    if (terms.empty()) {
      // LP rows need at least one term.
      out << " 0 " << (inst.variables.empty() ? std::string("dummy")
                                              : variable_name(inst.variables.front()));
      return;
    }
    int on_line = 0;
    bool first = true;
    for (const auto& t : terms) {
      if (on_line == 8) {
        out << "\n   ";
        on_line = 0;
      }
      out << (t.coef < 0 ? (first ? " -" : " - ") : (first ? " " : " + "));
      const double mag = std::abs(t.coef);
      if (mag != 1.0) out << format_number(mag) << ' ';
      out << variable_name(inst.variables[static_cast<std::size_t>(t.var)]);
      first = false;
      ++on_line;
    }
  };
  out << "\\ fsotopo topology instance " << inst.scenario_digest << "\n";
  out << "Minimize\n obj:";
  std::vector<Term> obj;
  for (std::size_t v = 0; v < inst.objective.size(); ++v) {
    if (inst.objective[v] != 0.0) obj.push_back({static_cast<int>(v), inst.objective[v]});
  }
  write_terms(obj);
  if (inst.objective_offset != 0.0) {
    out << (inst.objective_offset < 0 ? " - " : " + ")
        << format_number(std::abs(inst.objective_offset));
  }
  out << "\nSubject To\n";
  for (const auto& row : inst.constraints) {
    out << ' ' << row.name << ':';
    write_terms(row.terms);
    switch (row.sense) {
      case Sense::kLe: out << " <= "; break;
      case Sense::kGe: out << " >= "; break;
      case Sense::kEq: out << " = "; break;
    }
    out << format_number(row.rhs) << '\n';
  }
  out << "Binaries\n";
  for (const auto& v : inst.variables) out << ' ' << variable_name(v) << '\n';
  out << "End\n";
}

void export_lp(const IlpInstance& inst, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("export_lp: cannot open " + path);
  export_lp(inst, file);
  if (!file) throw std::runtime_error("export_lp: write failed for " + path);
}

std::string instance_summary_json(const IlpInstance& inst, int sets_powers,
                                  int sets_beams) {
  nlohmann::ordered_json j;
  j["variables"] = inst.variables.size();
  j["constraints"] = inst.constraints.size();
  auto counts = inst.class_counts();
  nlohmann::ordered_json per_class;
  for (int c = 0; c < kConstraintClassCount; ++c) {
    per_class[std::string(class_label(static_cast<ConstraintClass>(c)))] =
        counts[static_cast<std::size_t>(c)];
  }
  j["per_class_counts"] = per_class;
  const auto n = static_cast<std::int64_t>(inst.node_count);
  const auto sd = static_cast<std::int64_t>(inst.requests.size());
  const auto t = static_cast<std::int64_t>(inst.max_transceivers);
  j["formula_W"] = count_variables(n, sd, t, sets_powers, sets_beams);
  j["formula_Z"] = count_constraints(n, sd, t, sets_powers, sets_beams);
  return j.dump(2);
}

}  // namespace fsotopo
