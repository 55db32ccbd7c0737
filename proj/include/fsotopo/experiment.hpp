#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsotopo/exact_solver.hpp"
#include "fsotopo/ilp.hpp"
#include "fsotopo/link_enumeration.hpp"
#include "fsotopo/lr_solver.hpp"
#include "fsotopo/network.hpp"
#include "fsotopo/pso_solver.hpp"
#include "fsotopo/scenario.hpp"

namespace fsotopo {

enum class Engine { kIlp, kLr, kPso, kFirstFit };

std::string_view engine_label(Engine engine);  // ILP, LR, PSO, FIRST_FIT
// Accepts ilp, lr, pso, firstfit (any case) and the labels above.
std::optional<Engine> parse_engine(std::string_view text);

struct EngineSettings {
  SolveBudget exact;
  LrConfig lr;
  SwarmConfig pso;
  // Independent swarms with seeds pso.seed, pso.seed + 1, ...; the run with
  // the fewest blocked requests, then the least power, is reported.
  int pso_restarts = 1;
  BuildOptions build;
};

// Candidates and instance built once per scenario.
struct Prepared {
  Scenario scenario;
  CandidateSet candidates;
  IlpInstance instance;
};

Prepared prepare(const Scenario& scenario, const BuildOptions& options = {});

struct RouteHop {
  int from = 0;  // node ids
  int to = 0;
  int tx = 0;
};

struct ConnectionRow {
  int request = 0;
  int s = 0;  // node ids
  int d = 0;
  int max_hops = 0;
  double min_throughput_mbps = 0.0;
  bool routed = false;
  std::vector<int> path;       // node ids from s to d
  std::vector<RouteHop> hops;  // path hops, then any other hops of the request
};

struct LinkRow {
  int from = 0;  // node ids
  int to = 0;
  int tx = 0;
  bool fso = false;
  double power_mw = 0.0;
  double theta_t_mrad = 0.0;
  double theta_r_mrad = 0.0;
  double capacity_mbps = 0.0;
  double load_mbps = 0.0;
};

struct SolveReport {
  Engine engine = Engine::kIlp;
  SolveStatus status = SolveStatus::kNoFeasibleFound;
  bool feasible = false;
  std::optional<double> total_power_mw;  // empty without a topology
  std::vector<int> blocked;              // request indices
  std::size_t request_count = 0;
  std::vector<ConnectionRow> connections;
  std::vector<LinkRow> links;
  std::vector<std::uint8_t> assignment;  // topology the tables describe
  std::int64_t work = 0;                 // nodes, repair iterations or swarm iterations
  std::size_t original_rows = 0;         // LR only
  std::size_t active_after_first = 0;    // LR only
  double runtime_s = 0.0;
  std::string config_json;               // engine settings
  std::map<std::string, std::string> flags;  // caller supplied echo
};

// Builds the tables from a topology. `blocked` requests are left unrouted and
// their rows are not checked.
SolveReport make_report(Engine engine, SolveStatus status, const Prepared& prepared,
                        const std::vector<std::uint8_t>& assignment,
                        const std::vector<int>& blocked);

SolveReport run_engine(Engine engine, const Prepared& prepared, const EngineSettings& settings);

// Throws std::invalid_argument when `engines` is empty.
std::vector<SolveReport> run_comparison(const Scenario& scenario,
                                        const std::vector<Engine>& engines,
                                        const EngineSettings& settings);

// Blocked requests over all requests; 0 without requests.
double blocking_probability(const SolveReport& report);

// Recomputes power, hop counts and link loads from the raw assignment.
// Returns one message per inconsistency.
std::vector<std::string> verify_report(const SolveReport& report, const Prepared& prepared);

// Deterministic JSON; runtime_s is included only when `timing` is set. A
// negative indent gives a single line.
std::string report_to_json(const SolveReport& report, bool timing = false, int indent = 2);
std::string comparison_to_json(const std::vector<SolveReport>& reports, bool timing = false);

std::string export_dot(const SolveReport& report, const Scenario& scenario);
void export_dot(const SolveReport& report, const Scenario& scenario, const std::string& path);

enum class SweepAxis { kRequests, kTransceivers };

struct SweepParams {
  SweepAxis axis = SweepAxis::kRequests;
  int from = 5;
  int to = 20;
  int step = 5;
  int seeds = 20;
  std::uint64_t base_seed = 1;
  GenerateParams base;  // the swept field is overwritten
  std::vector<Engine> engines{Engine::kPso, Engine::kFirstFit};
  EngineSettings settings;
};

struct SweepRow {
  int value = 0;
  std::uint64_t seed = 0;
  Engine engine = Engine::kIlp;
  std::string status;
  int requests = 0;
  int blocked = 0;
  double blocking = 0.0;
  double total_power_mw = 0.0;  // +inf without a topology
  std::size_t constraints = 0;
  std::size_t active_after_first = 0;  // LR only
};

// Scenario seed base_seed + s is shared by every point, so points differ
// only in the swept quantity.
std::vector<SweepRow> run_sweep(const SweepParams& params);

// Header plus one line per row.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct SweepSummary {
  int value = 0;
  Engine engine = Engine::kIlp;
  int runs = 0;
  double mean_blocking = 0.0;
  double mean_power_mw = 0.0;   // +inf when any run lacks a topology
  double mean_reduction = 0.0;  // share of rows deactivated, LR only
};

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows);
std::string summary_csv(const std::vector<SweepSummary>& summary);

}  // namespace fsotopo
