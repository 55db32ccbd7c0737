#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsotopo/exact_solver.hpp"
#include "fsotopo/ilp.hpp"
#include "fsotopo/link_enumeration.hpp"

namespace fsotopo {

// A path with one transceiver per hop; links index CandidateSet::links().
struct RouteEntry {
  std::vector<int> nodes;
  std::vector<int> transceivers;
  std::vector<int> links;

  int hops() const { return static_cast<int>(links.size()); }
};

struct RouteTable {
  std::vector<std::vector<RouteEntry>> entries;  // per request
};

// Node adjacency of the candidate graph: j is listed under i when any
// candidate i -> j exists. Lists are sorted.
std::vector<std::vector<int>> connectivity(const CandidateSet& cs, int node_count);

// Up to k loopless s-d paths in nondecreasing hop count. Among equal-length
// paths the search prefers lexicographically smaller node sequences.
std::vector<std::vector<int>> k_shortest_paths(const std::vector<std::vector<int>>& adjacency,
                                               int s, int d, int k);

// K paths per request, each expanded over the transceivers available on
// every hop. At most max_entries entries are kept per request.
RouteTable build_route_table(const CandidateSet& cs, int node_count,
                             const std::vector<QosRequest>& requests, int k,
                             std::size_t max_entries = 512);

// Requests by ascending hop bound, then descending throughput, then index.
std::vector<int> sorted_request_order(const std::vector<QosRequest>& requests);

struct FirstFitResult {
  std::vector<int> entry;               // per request, -1 when the table is empty
  std::vector<std::uint8_t> satisfied;  // per request
};

// Counter-based uniform draws: the same key always gives the same value.
double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                 std::uint64_t d);

// Places requests in `order`. Each takes the first entry within its hop
// bound that fits the residual capacity (minimum-setting candidate of each
// link) without a second FSO partner on any transceiver. Otherwise it gets
// an entry drawn from `random_key` and is marked unsatisfied.
FirstFitResult first_fit(const std::vector<int>& order, const RouteTable& table,
                         const std::vector<QosRequest>& requests, const CandidateSet& cs,
                         int max_transceivers, std::uint64_t seed = 0,
                         std::uint64_t random_key = 0);

struct SwarmConfig {
  int population = 30;
  int iterations = 300;
  double w = 0.72;
  double c1 = 1.49;
  double c2 = 1.49;
  int random_mix_R = 5;
  int K = 10;
  std::uint64_t seed = 1;
  int early_stop = 100;          // unchanged feasible best for this many iterations
  double penalty_weight = 0.0;   // <= 0: largest power level
  double throughput_scale = 0.0; // <= 0: 1 / largest throughput demand
  std::size_t max_entries = 512;

  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_fitness = 0.0;
};

class SwarmProblem;

// Sum of the violation magnitudes, throughput rows multiplied by
// throughput_scale, times weight * sqrt(k).
double penalty(const IlpInstance& inst, const FeasibilityReport& report, int k,
               double weight, double throughput_scale);

// Slot layout: power slots and beam slots (one each per link of the
// candidate set), then one route slot per request.
class SwarmProblem {
 public:
  SwarmProblem(const IlpInstance& inst, const CandidateSet& cs, const RouteTable& table,
               const SwarmConfig& config);

  std::size_t dimension() const { return lower_.size(); }
  double lower(std::size_t slot) const { return lower_[slot]; }
  double upper(std::size_t slot) const { return upper_[slot]; }
  std::size_t power_slot(int link) const { return static_cast<std::size_t>(link); }
  std::size_t beam_slot(int link) const { return links_ + static_cast<std::size_t>(link); }
  std::size_t route_slot(int request) const {
    return 2 * links_ + static_cast<std::size_t>(request);
  }

  // Ids of the variables set to 1 by the rounded position.
  std::vector<int> decode(const std::vector<double>& position) const;
  FeasibilityReport evaluate(const std::vector<double>& position) const;
  double fitness(const std::vector<double>& position, int k) const;

  // Position that routes every request through `entries` at the minimum
  // setting of each used link; other slots come from `fill`.
  std::vector<double> encode(const std::vector<int>& entries,
                             const std::vector<double>& fill) const;

  const IlpInstance& instance() const { return inst_; }
  double penalty_weight() const { return weight_; }
  double throughput_scale() const { return scale_; }

 private:
  const IlpInstance& inst_;
  const CandidateSet& cs_;
  const RouteTable& table_;
  std::size_t links_ = 0;
  std::vector<double> lower_, upper_;
  std::vector<std::vector<int>> route_var_;  // [request][link]
  std::vector<int> gvar_;                    // candidate -> variable
  SparseChecker checker_;
  double weight_ = 1.0;
  double scale_ = 1.0;
  int power_levels_ = 1;
  int beam_levels_ = 1;
};

std::vector<Particle> init_swarm(const SwarmProblem& problem, const SwarmConfig& config,
                                 const RouteTable& table, const std::vector<QosRequest>& requests,
                                 const CandidateSet& cs, int max_transceivers);

// One velocity and position update of every particle at iteration k.
void step(std::vector<Particle>& particles, const std::vector<double>& global_best,
          const SwarmProblem& problem, const SwarmConfig& config, int k);

struct PsoTraceEntry {
  int k = 0;
  double best_fitness = 0.0;
  bool feasible = false;
  int blocked_count = 0;
};

struct PsoOutcome {
  SolveResult result;               // kFeasible or kBlocked
  std::vector<int> blocked;         // request indices
  std::vector<std::uint8_t> served; // topology serving the admitted requests
  double served_objective = 0.0;
  int iterations_run = 0;
  double best_fitness = 0.0;
  std::vector<PsoTraceEntry> trace;
};

PsoOutcome pso_solve(const IlpInstance& inst, const CandidateSet& cs,
                     const SwarmConfig& config = {});

// One JSON object per line: {"k", "best_fitness", "feasible", "blocked_count"}.
std::string trace_json_lines(const std::vector<PsoTraceEntry>& trace);

}  // namespace fsotopo
