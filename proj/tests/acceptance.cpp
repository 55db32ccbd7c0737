// Prints one PASS/FAIL line per acceptance criterion. Arguments select a
// subset of criteria by number; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fsotopo/channel_model.hpp"
#include "fsotopo/exact_solver.hpp"
#include "fsotopo/experiment.hpp"
#include "fsotopo/ilp.hpp"
#include "fsotopo/link_enumeration.hpp"
#include "fsotopo/lr_solver.hpp"
#include "fsotopo/pso_solver.hpp"
#include "fsotopo/scenario.hpp"
#include "support.hpp"

namespace {

using namespace fsotopo;
using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pinned settings.
constexpr int kOracleInstances = 60;
constexpr int kDeskInstances = 24;
constexpr int kDeskMinimum = 20;
constexpr std::int64_t kDeskExactNodes = 2'000'000;
constexpr double kLrPsoShare = 0.70;
constexpr double kLrGap = 1.25;
constexpr int kPhysicsSamples = 10'000;
constexpr double kRangeTolerance = 1e-9;
constexpr int kSweepSeeds = 20;
constexpr double kSweepArea = 30.0;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// Full-service objective: +inf unless every request is served.
double served_power(const SolveReport& r) {
  if (!r.feasible || !r.blocked.empty() || !r.total_power_mw) return kInf;
  return *r.total_power_mw;
}

Outcome criterion1() {
  const auto z = count_constraints(10, 10, 4, 4, 4);
  return {z == 5890, "count_constraints(10,10,4,4,4) = " + std::to_string(z) + ", expected 5890"};
}

// Term-by-term evaluation of N[(N-1)(SD T + P(1 + T theta^2)) + T P].
std::int64_t w_oracle(std::int64_t n, std::int64_t sd, std::int64_t t, std::int64_t p,
                      std::int64_t theta) {
  const std::int64_t route_terms = sd * t;
  const std::int64_t beam_pairs = theta * theta;
  const std::int64_t select_terms = p * (1 + t * beam_pairs);
  const std::int64_t per_pair = route_terms + select_terms;
  const std::int64_t pair_total = (n - 1) * per_pair;
  const std::int64_t power_terms = t * p;
  return n * (pair_total + power_terms);
}

Outcome criterion2() {
  const std::int64_t n = 10, sd = 10, t = 4, p = 4, phi = 4;
  const auto oracle = w_oracle(n, sd, t, p, phi);
  const auto formula = count_variables(n, sd, t, p, phi);

  // Fully connected: every pair within range at every setting.
  Scenario s;
  std::vector<TransceiverSpec> layout{testing::rf_spec()};
  for (int k = 1; k < t; ++k) layout.push_back(testing::fso_spec());
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / static_cast<double>(n);
    s.nodes.push_back(testing::make_node(i + 1, std::cos(a), std::sin(a), layout));
  }
  s.sets = {{5.0, 10.0, 15.0, 20.0}, {60.0, 120.0, 180.0, 240.0}};
  for (int r = 0; r < sd; ++r) s.requests.push_back({r, (r + 1) % static_cast<int>(n), 1, 5.0});
  const auto cs = enumerate_candidates(s);
  const auto inst = build_instance(s, cs, s.requests);
  std::map<VarKind, std::int64_t> by_kind;
  for (const auto& v : inst.variables) ++by_kind[v.kind];
  const std::int64_t pairs = n * (n - 1);
  const std::int64_t fso = t - 1;
  const std::int64_t expect_route = pairs * t * sd;
  const std::int64_t expect_select = pairs * (p + fso * p * phi * phi);
  const std::int64_t expect_power = n * t * p;
  const auto enumerated = static_cast<std::int64_t>(inst.size());
  const bool pass = oracle == formula && by_kind[VarKind::kRoute] == expect_route &&
                    by_kind[VarKind::kSelect] == expect_select &&
                    by_kind[VarKind::kPower] == expect_power &&
                    enumerated == expect_route + expect_select + expect_power;
  std::ostringstream d;
  d << "W oracle " << oracle << ", count_variables " << formula << ", reference 25740 (differs by "
    << formula - 25740 << "), enumerated " << enumerated << " = " << by_kind[VarKind::kRoute]
    << " route + " << by_kind[VarKind::kSelect] << " selection + " << by_kind[VarKind::kPower]
    << " power (1 RF + 3 FSO)";
  return {pass, d.str()};
}

Outcome criterion3() {
  const auto start = Clock::now();
  int compared = 0, agree = 0;
  for (std::uint64_t seed = 1; compared < kOracleInstances && seed < 10'000; ++seed) {
    const auto s = testing::tiny_random_scenario(seed);
    const auto cs = enumerate_candidates(s);
    if (cs.empty() && !s.requests.empty()) continue;
    const auto inst = build_instance(s, cs, s.requests);
    if (inst.size() > static_cast<std::size_t>(kBruteForceMaxVariables)) continue;
    ++compared;
    const auto a = solve_exact(inst);
    const auto b = brute_force(inst);
    if (a.status == b.status && (a.status != SolveStatus::kOptimal || a.objective == b.objective)) {
      ++agree;
    }
  }
  const double t = seconds_since(start);
  return {compared >= 50 && agree == compared && t < 60.0,
          std::to_string(agree) + "/" + std::to_string(compared) +
              " instances agree on status and objective, " + fmt(t) + " s"};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ChannelParams ch;
  int loss_bad = 0, ber_bad = 0, range_bad = 0, range_checked = 0;
  for (int i = 0; i < kPhysicsSamples; ++i) {
    const double p = 1.0 + 99.0 * u01(rng);
    const double diam = 0.01 + u01(rng);
    const double theta = 1e-3 * (1.0 + 239.0 * u01(rng));
    const double d1 = 100.0 * u01(rng);
    const double d2 = d1 + 1e-3 + 100.0 * u01(rng);
    if (!(geometric_loss(p, diam, d2, theta) < geometric_loss(p, diam, d1, theta))) ++loss_bad;
    if (!(geometric_loss(p, diam, d1, theta * 1.5) < geometric_loss(p, diam, d1, theta))) ++loss_bad;
  }
  for (int i = 0; i < kPhysicsSamples; ++i) {
    const double a = std::pow(10.0, -12.0 + 10.0 * u01(rng));
    const double b = a * (1.0 + 10.0 * u01(rng) + 1e-6);
    const auto kind = i % 2 ? TransceiverKind::kRf : TransceiverKind::kFso;
    if (link_ber(kind, b, ch) > link_ber(kind, a, ch)) ++ber_bad;
  }
  for (int i = 0; i < kPhysicsSamples; ++i) {
    TransceiverSpec tx = i % 2 ? testing::rf_spec() : testing::fso_spec();
    tx.sensitivity_dbm = tx.is_fso() ? -50.0 + 15.0 * u01(rng) : -95.0 + 20.0 * u01(rng);
    const double p = 1.0 + 49.0 * u01(rng);
    const double theta = 1e-3 * (20.0 + 220.0 * u01(rng));
    const double r = max_range(tx, p, theta, ch);
    if (r <= 1.0 || r >= ch.range_cap_m) continue;
    ++range_checked;
    const double back = received_power(tx, p, r, theta, ch);
    const double target = dbm_to_mw(tx.sensitivity_dbm);
    if (std::abs(back - target) > kRangeTolerance * target) ++range_bad;
  }
  std::ostringstream d;
  d << "loss violations " << loss_bad << "/" << 2 * kPhysicsSamples << ", BER violations "
    << ber_bad << "/" << kPhysicsSamples << ", range round trips off by > 1e-9 rel "
    << range_bad << "/" << range_checked;
  return {loss_bad == 0 && ber_bad == 0 && range_bad == 0 && range_checked > kPhysicsSamples / 2,
          d.str()};
}

struct DeskRun {
  int index = 0;
  int nodes = 0;
  SolveReport ilp, lr, pso;
  double check_seconds = 0.0;
  bool lr_checked = true, pso_checked = true;
};

std::vector<DeskRun>& desk_suite() {
  static std::vector<DeskRun> runs;
  static bool done = false;
  if (done) return runs;
  done = true;
  EngineSettings settings;
  settings.exact.max_nodes = kDeskExactNodes;
  for (int i = 0; i < kDeskInstances; ++i) {
    GenerateParams g;
    g.nodes = 5 + i % 4;
    g.area = {25.0, 25.0};
    g.requests = 3 + i % 3;
    g.seed = 100 + static_cast<std::uint64_t>(i);
    g.transceivers = 3;
    const auto prepared = prepare(generate_scenario(g));
    DeskRun run;
    run.index = i;
    run.nodes = g.nodes;
    run.ilp = run_engine(Engine::kIlp, prepared, settings);
    run.lr = run_engine(Engine::kLr, prepared, settings);
    run.pso = run_engine(Engine::kPso, prepared, settings);
    const auto t = Clock::now();
    for (auto* r : {&run.lr, &run.pso}) {
      if (r->status != SolveStatus::kFeasible) continue;
      const bool ok = check_feasible(prepared.instance, r->assignment).feasible();
      (r == &run.lr ? run.lr_checked : run.pso_checked) = ok;
    }
    run.check_seconds = seconds_since(t);
    std::cout << "  desk " << i << " n=" << g.nodes << " vars=" << prepared.instance.size()
              << " ILP " << status_label(run.ilp.status) << ' ' << served_power(run.ilp)
              << " LR " << served_power(run.lr) << " (" << fmt(run.lr.runtime_s) << " s) PSO "
              << served_power(run.pso) << '\n';
    runs.push_back(std::move(run));
  }
  return runs;
}

Outcome criterion4() {
  int checked = 0, passed = 0;
  double worst = 0.0;
  for (const auto& r : desk_suite()) {
    for (const auto* rep : {&r.lr, &r.pso}) {
      if (rep->status != SolveStatus::kFeasible) continue;
      ++checked;
      if (rep == &r.lr ? r.lr_checked : r.pso_checked) ++passed;
    }
    worst = std::max(worst, r.check_seconds);
  }
  return {checked > 0 && passed == checked && worst < 1.0,
          std::to_string(passed) + "/" + std::to_string(checked) +
              " successful LR/PSO outputs pass check_feasible, slowest check " + fmt(worst) +
              " s"};
}

Outcome criterion5() {
  int completed = 0, ilp_le = 0, lr_le_pso = 0;
  for (const auto& r : desk_suite()) {
    if (r.ilp.status != SolveStatus::kOptimal) continue;
    ++completed;
    const double ilp = served_power(r.ilp), lr = served_power(r.lr), pso = served_power(r.pso);
    if (ilp <= lr && ilp <= pso) ++ilp_le;
    if (lr <= pso) ++lr_le_pso;
  }
  const double share = completed ? static_cast<double>(lr_le_pso) / completed : 0.0;
  return {completed >= kDeskMinimum && ilp_le == completed && share >= kLrPsoShare,
          std::to_string(completed) + " completed instances, ILP <= LR and PSO in " +
              std::to_string(ilp_le) + ", LR <= PSO in " + std::to_string(lr_le_pso) + " (" +
              fmt(100.0 * share) + "%, need 70%)"};
}

Outcome criterion6() {
  std::vector<double> ratios;
  for (const auto& r : desk_suite()) {
    if (r.ilp.status != SolveStatus::kOptimal) continue;
    const double ilp = served_power(r.ilp), lr = served_power(r.lr);
    if (ilp == 0.0) {
      ratios.push_back(lr == 0.0 ? 1.0 : kInf);
    } else {
      ratios.push_back(lr / ilp);
    }
  }
  if (ratios.empty()) return {false, "no completed instances"};
  std::sort(ratios.begin(), ratios.end());
  const auto m = ratios.size();
  const double median = m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  return {ratios.size() >= kDeskMinimum && median <= kLrGap,
          "median LR/ILP " + fmt(median) + " over " + std::to_string(m) +
              " instances, worst " + fmt(ratios.back()) + " (need <= 1.25)"};
}

std::vector<SweepSummary> sweep(SweepParams p, const std::string& csv) {
  const auto rows = run_sweep(p);
  std::ofstream(csv) << sweep_csv(rows);
  return summarize(rows);
}

std::map<Engine, std::vector<double>> blocking_series(const std::vector<SweepSummary>& summary) {
  std::map<Engine, std::vector<double>> series;
  for (const auto& s : summary) series[s.engine].push_back(s.mean_blocking);
  return series;
}

std::string series_text(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + fmt(x);
  return out;
}

Outcome criterion8() {
  SweepParams p;
  p.axis = SweepAxis::kRequests;
  p.from = 5;
  p.to = 20;
  p.step = 5;
  p.seeds = kSweepSeeds;
  p.base.nodes = 10;
  p.base.area = {kSweepArea, kSweepArea};
  p.base.transceivers = 3;
  p.engines = {Engine::kPso, Engine::kFirstFit};
  const auto start = Clock::now();
  auto series = blocking_series(sweep(p, "blocking_vs_requests.csv"));
  const auto& pso = series[Engine::kPso];
  const auto& ff = series[Engine::kFirstFit];
  bool better = pso.size() == ff.size();
  for (std::size_t i = 0; better && i < pso.size(); ++i) better = pso[i] <= ff[i];
  const bool trend = std::is_sorted(pso.begin(), pso.end()) && std::is_sorted(ff.begin(), ff.end());
  const double t = seconds_since(start);
  return {better && trend && t <= 900.0,
          "|SD| 5..20 mean blocking PSO [" + series_text(pso) + "] first-fit [" +
              series_text(ff) + "], " + fmt(t) + " s"};
}

Outcome criterion9() {
  SweepParams p;
  p.axis = SweepAxis::kTransceivers;
  p.from = 2;
  p.to = 5;
  p.step = 1;
  p.seeds = kSweepSeeds;
  p.base.nodes = 10;
  p.base.area = {kSweepArea, kSweepArea};
  p.base.requests = 15;
  p.engines = {Engine::kPso, Engine::kFirstFit};
  const auto start = Clock::now();
  auto series = blocking_series(sweep(p, "blocking_vs_transceivers.csv"));
  auto pso = series[Engine::kPso];
  auto ff = series[Engine::kFirstFit];
  const bool trend = std::is_sorted(pso.rbegin(), pso.rend()) && std::is_sorted(ff.rbegin(), ff.rend());
  const double t = seconds_since(start);
  return {trend && !pso.empty() && t <= 900.0,
          "|T| 2..5 mean blocking PSO [" + series_text(pso) + "] first-fit [" +
              series_text(ff) + "], " + fmt(t) + " s"};
}

Outcome criterion10() {
  SweepParams p;
  p.axis = SweepAxis::kTransceivers;
  p.from = 2;
  p.to = 5;
  p.step = 1;
  p.seeds = 1;
  p.base.nodes = 10;
  p.base.area = {kSweepArea, kSweepArea};
  p.base.requests = 5;
  p.base.sets = {{5.0, 10.0, 15.0, 20.0}, {60.0, 120.0, 180.0, 240.0}};
  p.engines = {Engine::kLr};
  p.settings.lr.max_iter = 1;
  const auto start = Clock::now();
  const auto rows = run_sweep(p);
  {
    std::ofstream csv("reduction_vs_transceivers.csv");
    csv << "transceivers,constraints,active_after_first,deactivated_percent\n";
    for (const auto& r : rows) {
      csv << r.value << ',' << r.constraints << ',' << r.active_after_first << ','
          << 100.0 * (1.0 - static_cast<double>(r.active_after_first) /
                                static_cast<double>(std::max<std::size_t>(r.constraints, 1)))
          << '\n';
    }
  }
  std::string text;
  bool positive = !rows.empty();
  for (const auto& r : rows) {
    const double pct = r.constraints ? 100.0 * (1.0 - static_cast<double>(r.active_after_first) /
                                                          static_cast<double>(r.constraints))
                                     : 0.0;
    positive = positive && pct > 0.0;
    text += (text.empty() ? "" : " ") + std::to_string(r.value) + ":" + fmt(pct) + "%";
  }
  return {positive && std::ifstream("reduction_vs_transceivers.csv").good(),
          "|T| -> rows deactivated after the first repair [" + text + "], reduction_vs_transceivers.csv, " +
              fmt(seconds_since(start)) + " s"};
}

Outcome criterion11() {
  GenerateParams g;
  g.nodes = 6;
  g.area = {25.0, 25.0};
  g.requests = 4;
  g.seed = 101;
  const auto prepared = prepare(generate_scenario(g));
  EngineSettings settings;
  settings.exact.max_nodes = kDeskExactNodes;
  int identical = 0;
  const std::vector<Engine> engines{Engine::kIlp, Engine::kLr, Engine::kPso, Engine::kFirstFit};
  for (Engine e : engines) {
    const auto a = report_to_json(run_engine(e, prepared, settings));
    const auto b = report_to_json(run_engine(e, prepared, settings));
    if (a == b) ++identical;
  }
  return {identical == static_cast<int>(engines.size()),
          std::to_string(identical) + "/4 engines give byte-identical reports on rerun"};
}

Outcome criterion12() {
  // Two nodes, one FSO link, a request the link cannot carry.
  auto s = testing::two_node_scenario({5.0, 10.0}, {80.0});
  s.requests.push_back({0, 1, 1, 2000.0});
  const auto cs = enumerate_candidates(s);
  const auto inst = build_instance(s, cs, s.requests);
  const auto table = build_route_table(cs, inst.node_count, inst.requests, 3);
  SwarmConfig config;
  config.penalty_weight = 1.0;
  config.throughput_scale = 1.0;
  const SwarmProblem problem(inst, cs, table, config);
  std::vector<double> position(problem.dimension());
  for (std::size_t i = 0; i < position.size(); ++i) position[i] = problem.lower(i);
  const auto report = problem.evaluate(position);
  const double base = report.objective;
  const double p1 = problem.fitness(position, 1) - base;
  const double p4 = problem.fitness(position, 4) - base;
  return {!report.feasible() && p1 > 0.0 && p4 == 2.0 * p1,
          "frozen infeasible particle: objective " + fmt(base) + ", penalty k=1 " + fmt(p1) +
              ", k=4 " + fmt(p4)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3,  criterion4,  criterion5,  criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int number = static_cast<int>(c) + 1;
    if (!wanted.empty() && !wanted.count(number)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[c]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << number << ": " << (o.pass ? "PASS" : "FAIL") << " - "
              << o.detail << " [" << fmt(seconds_since(start)) << " s]" << std::endl;
  }
  return failures;
}
