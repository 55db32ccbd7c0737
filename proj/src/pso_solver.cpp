#include "fsotopo/pso_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace fsotopo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using EdgeSet = std::set<std::pair<int, int>>;

// Lexicographically smallest shortest path from s to d, or nothing.
std::optional<std::vector<int>> lex_shortest(const std::vector<std::vector<int>>& adj,
                                             const std::vector<std::vector<int>>& rev, int s,
                                             int d, const std::vector<std::uint8_t>& banned,
                                             const EdgeSet& cut) {
  const auto n = adj.size();
  std::vector<int> dist(n, -1);
  std::vector<int> queue{d};
  dist[static_cast<std::size_t>(d)] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (int u : rev[static_cast<std::size_t>(v)]) {
      if (banned[static_cast<std::size_t>(u)] || dist[static_cast<std::size_t>(u)] >= 0) continue;
      if (cut.count({u, v})) continue;
      dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
      queue.push_back(u);
    }
  }
  if (dist[static_cast<std::size_t>(s)] < 0) return std::nullopt;
  std::vector<int> path{s};
  int at = s;
  while (at != d) {
    int next = -1;
    for (int v : adj[static_cast<std::size_t>(at)]) {
      if (banned[static_cast<std::size_t>(v)] || cut.count({at, v})) continue;
      if (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(at)] - 1) {
        next = v;
        break;
      }
    }
    path.push_back(next);
    at = next;
  }
  return path;
}

struct PathOrder {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                 std::uint64_t d) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ a);
  h = splitmix(h ^ b);
  h = splitmix(h ^ c);
  h = splitmix(h ^ d);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<std::vector<int>> connectivity(const CandidateSet& cs, int node_count) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(node_count));
  for (const auto& k : cs.links()) {
    auto& out = adj[static_cast<std::size_t>(k.from)];
    if (out.empty() || out.back() != k.to) out.push_back(k.to);
  }
  return adj;
}

std::vector<std::vector<int>> k_shortest_paths(const std::vector<std::vector<int>>& adjacency,
                                               int s, int d, int k) {
  const auto n = adjacency.size();
  std::vector<std::vector<int>> result;
  if (k <= 0 || s == d || s < 0 || d < 0 || static_cast<std::size_t>(std::max(s, d)) >= n) {
    return result;
  }
  std::vector<std::vector<int>> rev(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (int v : adjacency[u]) rev[static_cast<std::size_t>(v)].push_back(static_cast<int>(u));
  }
  std::vector<std::uint8_t> banned(n, 0);
  auto first = lex_shortest(adjacency, rev, s, d, banned, {});
  if (!first) return result;
  result.push_back(*first);
  std::set<std::vector<int>, PathOrder> pending;
  while (static_cast<int>(result.size()) < k) {
    const auto prev = result.back();
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      const std::vector<int> root(prev.begin(), prev.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      EdgeSet cut;
      for (const auto& p : result) {
        if (p.size() > i + 1 && std::equal(root.begin(), root.end(), p.begin())) {
          cut.insert({p[i], p[i + 1]});
        }
      }
      std::fill(banned.begin(), banned.end(), 0);
      for (std::size_t j = 0; j < i; ++j) banned[static_cast<std::size_t>(root[j])] = 1;
      auto spur = lex_shortest(adjacency, rev, prev[i], d, banned, cut);
      if (!spur) continue;
      auto total = root;
      total.insert(total.end(), spur->begin() + 1, spur->end());
      if (std::find(result.begin(), result.end(), total) == result.end()) {
        pending.insert(std::move(total));
      }
    }
    if (pending.empty()) break;
    result.push_back(*pending.begin());
    pending.erase(pending.begin());
  }
  return result;
}

RouteTable build_route_table(const CandidateSet& cs, int node_count,
                             const std::vector<QosRequest>& requests, int k,
                             std::size_t max_entries) {
  const auto adj = connectivity(cs, node_count);
  int max_t = 0;
  for (const auto& l : cs.links()) max_t = std::max(max_t, l.tx + 1);
  RouteTable table;
  table.entries.resize(requests.size());
  for (std::size_t r = 0; r < requests.size(); ++r) {
    auto& out = table.entries[r];
    for (const auto& path : k_shortest_paths(adj, requests[r].s, requests[r].d, k)) {
      // Transceiver choices per hop, then an odometer over them.
      std::vector<std::vector<std::pair<int, int>>> hops;
      for (std::size_t h = 0; h + 1 < path.size(); ++h) {
        std::vector<std::pair<int, int>> choices;
        for (int t = 0; t < max_t; ++t) {
          if (auto l = cs.find_link({path[h], path[h + 1], t})) choices.emplace_back(t, *l);
        }
        hops.push_back(std::move(choices));
      }
      std::vector<std::size_t> digit(hops.size(), 0);
      while (out.size() < max_entries) {
        RouteEntry e;
        e.nodes = path;
        for (std::size_t h = 0; h < hops.size(); ++h) {
          e.transceivers.push_back(hops[h][digit[h]].first);
          e.links.push_back(hops[h][digit[h]].second);
        }
        out.push_back(std::move(e));
        bool wrapped = true;
        for (std::size_t h = hops.size(); h-- > 0;) {
          if (++digit[h] < hops[h].size()) {
            wrapped = false;
            break;
          }
          digit[h] = 0;
        }
        if (wrapped) break;
      }
    }
  }
  return table;
}

std::vector<int> sorted_request_order(const std::vector<QosRequest>& requests) {
  std::vector<int> order(requests.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& qa = requests[static_cast<std::size_t>(a)];
    const auto& qb = requests[static_cast<std::size_t>(b)];
    if (qa.max_hops != qb.max_hops) return qa.max_hops < qb.max_hops;
    return qa.min_throughput_mbps > qb.min_throughput_mbps;
  });
  return order;
}

FirstFitResult first_fit(const std::vector<int>& order, const RouteTable& table,
                         const std::vector<QosRequest>& requests, const CandidateSet& cs,
                         int max_transceivers, std::uint64_t seed, std::uint64_t random_key) {
  FirstFitResult out;
  out.entry.assign(requests.size(), -1);
  out.satisfied.assign(requests.size(), 0);
  std::vector<double> residual(cs.links().size());
  for (std::size_t l = 0; l < residual.size(); ++l) {
    residual[l] = cs[static_cast<std::size_t>(cs.link_range(static_cast<int>(l)).first)].capacity_mbps();
  }
  int node_count = 0;
  for (const auto& l : cs.links()) node_count = std::max({node_count, l.from + 1, l.to + 1});
  const auto slots = static_cast<std::size_t>(node_count * std::max(max_transceivers, 1));
  std::vector<int> fso_out(slots, -1), fso_in(slots, -1);

  for (int r : order) {
    const auto& q = requests[static_cast<std::size_t>(r)];
    const auto& entries = table.entries[static_cast<std::size_t>(r)];
    if (entries.empty()) continue;
    int chosen = -1;
    for (std::size_t e = 0; e < entries.size() && chosen < 0; ++e) {
      const auto& entry = entries[e];
      if (entry.hops() > q.max_hops) continue;
      bool fits = true;
      for (int l : entry.links) {
        const auto& key = cs.links()[static_cast<std::size_t>(l)];
        if (residual[static_cast<std::size_t>(l)] < q.min_throughput_mbps - 1e-9) fits = false;
        if (!cs[static_cast<std::size_t>(cs.link_range(l).first)].omni()) {
          const int o = fso_out[static_cast<std::size_t>(key.from * max_transceivers + key.tx)];
          const int i = fso_in[static_cast<std::size_t>(key.to * max_transceivers + key.tx)];
          if ((o >= 0 && o != key.to) || (i >= 0 && i != key.from)) fits = false;
        }
        if (!fits) break;
      }
      if (fits) chosen = static_cast<int>(e);
    }
    if (chosen >= 0) {
      out.entry[static_cast<std::size_t>(r)] = chosen;
      out.satisfied[static_cast<std::size_t>(r)] = 1;
      for (int l : entries[static_cast<std::size_t>(chosen)].links) {
        const auto& key = cs.links()[static_cast<std::size_t>(l)];
        residual[static_cast<std::size_t>(l)] -= q.min_throughput_mbps;
        if (!cs[static_cast<std::size_t>(cs.link_range(l).first)].omni()) {
          fso_out[static_cast<std::size_t>(key.from * max_transceivers + key.tx)] = key.to;
          fso_in[static_cast<std::size_t>(key.to * max_transceivers + key.tx)] = key.from;
        }
      }
    } else {
      const double u = uniform01(seed, random_key, static_cast<std::uint64_t>(r), 0, 7);
      out.entry[static_cast<std::size_t>(r)] = std::min(
          static_cast<int>(u * static_cast<double>(entries.size())),
          static_cast<int>(entries.size()) - 1);
    }
  }
  return out;
}

void SwarmConfig::validate() const {
  if (population < 1) throw std::invalid_argument("SwarmConfig: population must be >= 1");
  if (iterations < 1) throw std::invalid_argument("SwarmConfig: iterations must be >= 1");
  if (w < 0 || c1 < 0 || c2 < 0) {
    throw std::invalid_argument("SwarmConfig: w, c1 and c2 must be >= 0");
  }
  if (random_mix_R < 1) throw std::invalid_argument("SwarmConfig: random_mix_R must be >= 1");
  if (K < 1) throw std::invalid_argument("SwarmConfig: K must be >= 1");
}

double penalty(const IlpInstance& inst, const FeasibilityReport& report, int k, double weight,
               double throughput_scale) {
  double sum = 0.0;
  for (const auto& v : report.violations) {
    const auto& row = inst.constraints[static_cast<std::size_t>(v.row)];
    const double magnitude = std::abs(v.slack);
    sum += row.tag == ConstraintClass::kThroughput ? magnitude * throughput_scale : magnitude;
  }
  return std::sqrt(static_cast<double>(k)) * weight * sum;
}

SwarmProblem::SwarmProblem(const IlpInstance& inst, const CandidateSet& cs,
                           const RouteTable& table, const SwarmConfig& config)
    : inst_(inst), cs_(cs), table_(table), links_(cs.links().size()), checker_(inst) {
  // Highest index present in the candidate set bounds each slot.
  for (const auto& c : cs.candidates()) {
    power_levels_ = std::max(power_levels_, c.power_index + 1);
    beam_levels_ = std::max(beam_levels_, c.beam_t_index + 1);
  }
  lower_.assign(2 * links_ + inst.requests.size(), 0.0);
  upper_.assign(lower_.size(), 0.0);
  for (std::size_t l = 0; l < links_; ++l) {
    upper_[power_slot(static_cast<int>(l))] = power_levels_ - 1;
    upper_[beam_slot(static_cast<int>(l))] = beam_levels_ - 1;
  }
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto len = table.entries[r].size();
    upper_[route_slot(static_cast<int>(r))] = len > 0 ? static_cast<double>(len - 1) : 0.0;
  }
  route_var_.assign(inst.requests.size(), std::vector<int>(links_, -1));
  gvar_.assign(cs.size(), -1);
  for (const auto& v : inst.variables) {
    if (v.kind == VarKind::kRoute) {
      route_var_[static_cast<std::size_t>(v.request)][static_cast<std::size_t>(v.link)] = v.id;
    } else if (v.kind == VarKind::kSelect) {
      gvar_[static_cast<std::size_t>(v.candidate)] = v.id;
    }
  }
  weight_ = config.penalty_weight;
  if (weight_ <= 0.0) {
    weight_ = 0.0;
    for (double c : inst.objective) weight_ = std::max(weight_, c);
    if (weight_ <= 0.0) weight_ = 1.0;
  }
  scale_ = config.throughput_scale;
  if (scale_ <= 0.0) {
    double max_th = 0.0;
    for (const auto& q : inst.requests) max_th = std::max(max_th, q.min_throughput_mbps);
    scale_ = max_th > 0.0 ? 1.0 / max_th : 1.0;
  }
}

std::vector<int> SwarmProblem::decode(const std::vector<double>& position) const {
  auto rounded = [&](std::size_t slot) {
    const double v = std::clamp(position[slot], lower_[slot], upper_[slot]);
    return static_cast<int>(std::lround(v));
  };
  std::vector<int> ones;
  std::vector<int> used;
  std::vector<std::uint8_t> is_used(links_, 0);
  for (std::size_t r = 0; r < inst_.requests.size(); ++r) {
    const auto& entries = table_.entries[r];
    if (entries.empty()) continue;
    const auto& entry = entries[static_cast<std::size_t>(rounded(route_slot(static_cast<int>(r))))];
    for (int l : entry.links) {
      ones.push_back(route_var_[r][static_cast<std::size_t>(l)]);
      if (!is_used[static_cast<std::size_t>(l)]) {
        is_used[static_cast<std::size_t>(l)] = 1;
        used.push_back(l);
      }
    }
  }
  std::sort(used.begin(), used.end());
  const int max_t = std::max(inst_.max_transceivers, 1);
  // One power level per transmitting transceiver.
  std::vector<int> unified(static_cast<std::size_t>(inst_.node_count * max_t), -1);
  for (int l : used) {
    const auto& key = cs_.links()[static_cast<std::size_t>(l)];
    auto& u = unified[static_cast<std::size_t>(key.from * max_t + key.tx)];
    u = std::max(u, rounded(power_slot(l)));
  }
  auto nearest = [&](int l, int p, int bt, int br) {
    auto [b, e] = cs_.link_range(l);
    int best = b;
    std::tuple<int, int, int> best_key{std::numeric_limits<int>::max(), 0, 0};
    for (int c = b; c < e; ++c) {
      const auto& cand = cs_[static_cast<std::size_t>(c)];
      const std::tuple<int, int, int> key{
          std::abs(cand.power_index - p),
          bt < 0 ? 0 : std::abs(cand.beam_t_index - bt),
          br < 0 ? 0 : std::abs(cand.beam_r_index - br)};
      if (key < best_key) {
        best_key = key;
        best = c;
      }
    }
    return best;
  };
  std::vector<int> chosen(links_, -1);
  std::vector<int> send_beam(static_cast<std::size_t>(inst_.node_count * max_t), -1);
  for (int l : used) {
    const auto& key = cs_.links()[static_cast<std::size_t>(l)];
    const int p = unified[static_cast<std::size_t>(key.from * max_t + key.tx)];
    const bool omni = cs_[static_cast<std::size_t>(cs_.link_range(l).first)].omni();
    const int c = nearest(l, p, omni ? -1 : rounded(beam_slot(l)), -1);
    chosen[static_cast<std::size_t>(l)] = c;
    if (!omni) {
      send_beam[static_cast<std::size_t>(key.from * max_t + key.tx)] =
          cs_[static_cast<std::size_t>(c)].beam_t_index;
    }
  }
  // Receive beam follows the receiver's own transmit beam on that transceiver.
  std::vector<int> powers;
  for (int l : used) {
    int c = chosen[static_cast<std::size_t>(l)];
    const auto& cand = cs_[static_cast<std::size_t>(c)];
    if (!cand.omni()) {
      const int own = send_beam[static_cast<std::size_t>(cand.to * max_t + cand.tx)];
      const int br = own >= 0 ? own : cand.beam_t_index;
      if (cand.beam_r_index != br) c = nearest(l, cand.power_index, cand.beam_t_index, br);
    }
    ones.push_back(gvar_[static_cast<std::size_t>(c)]);
    const auto& sel = cs_[static_cast<std::size_t>(c)];
    powers.push_back(inst_.power_var(sel.from, sel.tx, sel.power_index));
  }
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end()), powers.end());
  for (int x : powers) {
    if (x >= 0) ones.push_back(x);
  }
  return ones;
}

FeasibilityReport SwarmProblem::evaluate(const std::vector<double>& position) const {
  return checker_.check(decode(position));
}

double SwarmProblem::fitness(const std::vector<double>& position, int k) const {
  const auto report = evaluate(position);
  return report.objective + penalty(inst_, report, k, weight_, scale_);
}

std::vector<double> SwarmProblem::encode(const std::vector<int>& entries,
                                         const std::vector<double>& fill) const {
  auto pos = fill;
  for (std::size_t r = 0; r < entries.size(); ++r) {
    const int e = entries[r];
    pos[route_slot(static_cast<int>(r))] = e < 0 ? 0.0 : e;
    if (e < 0) continue;
    for (int l : table_.entries[r][static_cast<std::size_t>(e)].links) {
      const auto& cand = cs_[static_cast<std::size_t>(cs_.link_range(l).first)];
      pos[power_slot(l)] = cand.power_index;
      if (!cand.omni()) pos[beam_slot(l)] = cand.beam_t_index;
    }
  }
  return pos;
}

std::vector<Particle> init_swarm(const SwarmProblem& problem, const SwarmConfig& config,
                                 const RouteTable& table, const std::vector<QosRequest>& requests,
                                 const CandidateSet& cs, int max_transceivers) {
  config.validate();
  const auto base_order = sorted_request_order(requests);
  const auto dim = problem.dimension();
  std::vector<Particle> swarm(static_cast<std::size_t>(config.population));
  for (int q = 0; q < config.population; ++q) {
    const auto uq = static_cast<std::uint64_t>(q);
    std::vector<double> fill(dim);
    for (std::size_t s = 0; s < dim; ++s) {
      const double u = uniform01(config.seed, 0, uq, s, 1);
      fill[s] = problem.lower(s) + u * (problem.upper(s) - problem.lower(s));
    }
    std::vector<int> entries;
    if (q == 0) {
      entries = first_fit(base_order, table, requests, cs, max_transceivers, config.seed, uq).entry;
    } else if (q % config.random_mix_R == 0) {
      entries.assign(requests.size(), -1);
      for (std::size_t r = 0; r < requests.size(); ++r) {
        const auto len = table.entries[r].size();
        if (len == 0) continue;
        const double u = uniform01(config.seed, 0, uq, r, 3);
        entries[r] = std::min(static_cast<int>(u * static_cast<double>(len)),
                              static_cast<int>(len) - 1);
      }
    } else {
      auto order = base_order;
      for (std::size_t i = order.size(); i > 1; --i) {
        const double u = uniform01(config.seed, 0, uq, i, 2);
        const auto j = std::min(static_cast<std::size_t>(u * static_cast<double>(i)), i - 1);
        std::swap(order[i - 1], order[j]);
      }
      entries = first_fit(order, table, requests, cs, max_transceivers, config.seed, uq).entry;
    }
    auto& p = swarm[static_cast<std::size_t>(q)];
    p.position = problem.encode(entries, fill);
    p.velocity.assign(dim, 0.0);
    p.best_position = p.position;
    p.best_fitness = kInf;
  }
  return swarm;
}

void step(std::vector<Particle>& particles, const std::vector<double>& global_best,
          const SwarmProblem& problem, const SwarmConfig& config, int k) {
  const auto uk = static_cast<std::uint64_t>(k);
  for (std::size_t q = 0; q < particles.size(); ++q) {
    auto& p = particles[q];
    for (std::size_t s = 0; s < p.position.size(); ++s) {
      const double r1 = uniform01(config.seed, uk, q, s, 4);
      const double r2 = uniform01(config.seed, uk, q, s, 5);
      const double x = p.position[s];
      p.velocity[s] = config.w * p.velocity[s] + config.c1 * r1 * (p.best_position[s] - x) +
                      config.c2 * r2 * (global_best[s] - x);
      p.position[s] = std::clamp(x + p.velocity[s], problem.lower(s), problem.upper(s));
    }
  }
}

PsoOutcome pso_solve(const IlpInstance& inst, const CandidateSet& cs, const SwarmConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto table =
      build_route_table(cs, inst.node_count, inst.requests, config.K, config.max_entries);
  const SwarmProblem problem(inst, cs, table, config);
  auto swarm = init_swarm(problem, config, table, inst.requests, cs, inst.max_transceivers);
  const auto order = sorted_request_order(inst.requests);
  const auto initial_first_fit = swarm.front().position;

  PsoOutcome out;
  std::vector<double> global_best;
  double global_fitness = kInf;
  std::optional<std::vector<double>> archive;
  double archive_objective = kInf;
  int global_blocked = 0;
  int unchanged = 0;

  auto blocked_count = [&](const std::vector<double>& position) {
    const auto ones = problem.decode(position);
    std::vector<std::uint8_t> x(inst.variables.size(), 0);
    for (int v : ones) x[static_cast<std::size_t>(v)] = 1;
    const auto adm = admit_requests(inst, x, order);
    return static_cast<int>(std::count(adm.admitted.begin(), adm.admitted.end(), 0));
  };

  int k = 1;
  for (; k <= config.iterations; ++k) {
    if (k > 1) step(swarm, global_best, problem, config, k);
    bool improved = false;
    for (auto& p : swarm) {
      const auto report = problem.evaluate(p.position);
      const double f =
          report.objective + penalty(inst, report, k, problem.penalty_weight(),
                                     problem.throughput_scale());
      if (report.feasible() && report.objective < archive_objective - 1e-9) {
        archive_objective = report.objective;
        archive = p.position;
      }
      if (f < p.best_fitness) {
        p.best_fitness = f;
        p.best_position = p.position;
      }
      if (p.best_fitness < global_fitness) {
        global_fitness = p.best_fitness;
        global_best = p.best_position;
        improved = true;
      }
    }
    const bool feasible = problem.evaluate(global_best).feasible();
    if (improved) global_blocked = blocked_count(global_best);
    out.trace.push_back({k, global_fitness, feasible, global_blocked});
    unchanged = improved ? 0 : unchanged + 1;
    if (feasible && unchanged >= config.early_stop) break;
  }
  out.iterations_run = std::min(k, config.iterations);
  out.best_fitness = global_fitness;

  auto to_bits = [&](const std::vector<int>& ones) {
    std::vector<std::uint8_t> x(inst.variables.size(), 0);
    for (int v : ones) x[static_cast<std::size_t>(v)] = 1;
    return x;
  };
  if (archive) {
    out.result.status = SolveStatus::kFeasible;
    out.result.found = true;
    out.result.assignment = to_bits(problem.decode(*archive));
    out.result.objective = archive_objective;
    out.served = out.result.assignment;
    out.served_objective = archive_objective;
  } else {
    // Fewest blocked requests, then least power, over the remembered
    // positions: the global best, every personal best and the seed particle.
    std::vector<const std::vector<double>*> pool{&global_best};
    for (const auto& p : swarm) pool.push_back(&p.best_position);
    pool.push_back(&initial_first_fit);
    int best_blocked = std::numeric_limits<int>::max();
    for (const auto* pos : pool) {
      const auto x = to_bits(problem.decode(*pos));
      const auto adm = admit_requests(inst, x, order);
      const int blocked = static_cast<int>(std::count(adm.admitted.begin(), adm.admitted.end(), 0));
      if (blocked < best_blocked ||
          (blocked == best_blocked && adm.objective < out.served_objective - 1e-9)) {
        best_blocked = blocked;
        out.result.assignment = x;
        out.served = adm.assignment;
        out.served_objective = adm.objective;
        out.blocked.clear();
        for (std::size_t r = 0; r < adm.admitted.size(); ++r) {
          if (!adm.admitted[r]) out.blocked.push_back(static_cast<int>(r));
        }
      }
    }
    out.result.found = true;
    if (out.blocked.empty()) out.result.assignment = out.served;
    const auto report = check_feasible(inst, out.result.assignment);
    out.result.objective = report.objective;
    out.result.status = report.feasible() ? SolveStatus::kFeasible : SolveStatus::kBlocked;
  }
  out.result.nodes_explored = out.iterations_run;
  out.result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string trace_json_lines(const std::vector<PsoTraceEntry>& trace) {
  std::string out;
  for (const auto& e : trace) {
    nlohmann::ordered_json j;
    j["k"] = e.k;
    j["best_fitness"] = e.best_fitness;
    j["feasible"] = e.feasible;
    j["blocked_count"] = e.blocked_count;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace fsotopo
