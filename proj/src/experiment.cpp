#include "fsotopo/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fsotopo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Json = nlohmann::ordered_json;

std::string lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::uint8_t> to_bits(const IlpInstance& inst, const std::vector<int>& ones) {
  std::vector<std::uint8_t> x(inst.variables.size(), 0);
  for (int v : ones) x[static_cast<std::size_t>(v)] = 1;
  return x;
}

std::string settings_json(Engine engine, const EngineSettings& s) {
  Json j;
  switch (engine) {
    case Engine::kIlp:
      j["budget_nodes"] = s.exact.max_nodes;
      if (std::isfinite(s.exact.max_seconds)) j["budget_secs"] = s.exact.max_seconds;
      break;
    case Engine::kLr:
      j["max_iter"] = s.lr.max_iter;
      j["dual_iters"] = s.lr.dual_iters;
      j["patience"] = s.lr.patience;
      j["initial_step"] = s.lr.initial_step;
      j["subproblem_nodes"] = s.lr.subproblem_budget.max_nodes;
      if (std::isfinite(s.lr.subproblem_budget.max_seconds)) {
        j["subproblem_secs"] = s.lr.subproblem_budget.max_seconds;
      }
      j["tie_break"] = s.lr.tie_break;
      break;
    case Engine::kPso:
    case Engine::kFirstFit:
      j["population"] = s.pso.population;
      j["iterations"] = s.pso.iterations;
      j["w"] = s.pso.w;
      j["c1"] = s.pso.c1;
      j["c2"] = s.pso.c2;
      j["random_mix_R"] = s.pso.random_mix_R;
      j["K"] = s.pso.K;
      j["seed"] = s.pso.seed;
      j["early_stop"] = s.pso.early_stop;
      j["penalty_weight"] = s.pso.penalty_weight;
      j["throughput_scale"] = s.pso.throughput_scale;
      j["max_entries"] = s.pso.max_entries;
      if (engine == Engine::kPso) j["restarts"] = s.pso_restarts;
      break;
  }
  j["tighten_big_m"] = s.build.tighten_big_m;
  return j.dump();
}

SolveReport first_fit_report(const Prepared& p, const SwarmConfig& config) {
  const auto& inst = p.instance;
  const auto table = build_route_table(p.candidates, inst.node_count, inst.requests, config.K,
                                       config.max_entries);
  const SwarmProblem problem(inst, p.candidates, table, config);
  const auto order = sorted_request_order(inst.requests);
  const auto ff = first_fit(order, table, inst.requests, p.candidates, inst.max_transceivers,
                            config.seed, 0);
  std::vector<double> fill(problem.dimension());
  for (std::size_t s = 0; s < fill.size(); ++s) fill[s] = problem.lower(s);
  const auto x = to_bits(inst, problem.decode(problem.encode(ff.entry, fill)));
  const auto adm = admit_requests(inst, x, order);
  std::vector<int> blocked;
  for (std::size_t r = 0; r < adm.admitted.size(); ++r) {
    if (!adm.admitted[r]) blocked.push_back(static_cast<int>(r));
  }
  return make_report(Engine::kFirstFit,
                     blocked.empty() ? SolveStatus::kFeasible : SolveStatus::kBlocked, p,
                     adm.assignment, blocked);
}

}  // namespace

std::string_view engine_label(Engine engine) {
  switch (engine) {
    case Engine::kIlp: return "ILP";
    case Engine::kLr: return "LR";
    case Engine::kPso: return "PSO";
    case Engine::kFirstFit: return "FIRST_FIT";
  }
  return "?";
}

std::optional<Engine> parse_engine(std::string_view text) {
  const auto t = lower(text);
  if (t == "ilp") return Engine::kIlp;
  if (t == "lr") return Engine::kLr;
  if (t == "pso") return Engine::kPso;
  if (t == "firstfit" || t == "first_fit") return Engine::kFirstFit;
  return std::nullopt;
}

Prepared prepare(const Scenario& scenario, const BuildOptions& options) {
  scenario.validate();
  Prepared p;
  p.scenario = scenario;
  p.candidates = enumerate_candidates(scenario);
  p.instance = build_instance(scenario, p.candidates, scenario.requests, options);
  return p;
}

SolveReport make_report(Engine engine, SolveStatus status, const Prepared& prepared,
                        const std::vector<std::uint8_t>& assignment,
                        const std::vector<int>& blocked) {
  const auto& inst = prepared.instance;
  const auto& sc = prepared.scenario;
  const auto& cs = prepared.candidates;
  SolveReport rep;
  rep.engine = engine;
  rep.status = status;
  rep.request_count = inst.requests.size();
  rep.blocked = blocked;
  std::sort(rep.blocked.begin(), rep.blocked.end());
  rep.assignment = assignment;
  const auto id = [&](int index) { return sc.nodes[static_cast<std::size_t>(index)].id; };
  std::vector<std::uint8_t> is_blocked(inst.requests.size(), 0);
  for (int r : rep.blocked) is_blocked[static_cast<std::size_t>(r)] = 1;

  const bool have = !assignment.empty();
  if (have) {
    CheckOptions opt;
    opt.skip_requests = rep.blocked;
    const auto check = check_feasible(inst, assignment, opt);
    rep.feasible = check.feasible();
    rep.total_power_mw = check.objective;
  }

  std::vector<double> load(cs.links().size(), 0.0);
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    const auto& q = inst.requests[r];
    ConnectionRow row;
    row.request = static_cast<int>(r);
    row.s = id(q.s);
    row.d = id(q.d);
    row.max_hops = q.max_hops;
    row.min_throughput_mbps = q.min_throughput_mbps;
    if (have && !is_blocked[r]) {
      std::vector<const IlpVariable*> hops;
      for (const auto& v : inst.variables) {
        if (v.kind == VarKind::kRoute && v.request == static_cast<int>(r) &&
            assignment[static_cast<std::size_t>(v.id)]) {
          hops.push_back(&v);
        }
      }
      std::vector<std::uint8_t> used(hops.size(), 0);
      int at = q.s;
      row.path.push_back(id(at));
      while (at != q.d) {
        std::size_t next = hops.size();
        for (std::size_t h = 0; h < hops.size(); ++h) {
          if (!used[h] && hops[h]->node == at) {
            next = h;
            break;
          }
        }
        if (next == hops.size()) break;
        used[next] = 1;
        const auto* v = hops[next];
        row.hops.push_back({id(v->node), id(v->to), v->tx});
        at = v->to;
        row.path.push_back(id(at));
      }
      row.routed = at == q.d && !row.hops.empty();
      if (!row.routed) row.path.clear();
      for (std::size_t h = 0; h < hops.size(); ++h) {
        if (!used[h]) row.hops.push_back({id(hops[h]->node), id(hops[h]->to), hops[h]->tx});
      }
      for (const auto* v : hops) load[static_cast<std::size_t>(v->link)] += q.min_throughput_mbps;
    }
    rep.connections.push_back(std::move(row));
  }

  if (have) {
    for (const auto& v : inst.variables) {
      if (v.kind != VarKind::kSelect || !assignment[static_cast<std::size_t>(v.id)]) continue;
      const auto& c = cs[static_cast<std::size_t>(v.candidate)];
      LinkRow row;
      row.from = id(c.from);
      row.to = id(c.to);
      row.tx = c.tx;
      row.fso = !c.omni();
      row.power_mw = c.power_mw;
      row.theta_t_mrad = c.theta_t_mrad;
      row.theta_r_mrad = c.theta_r_mrad;
      row.capacity_mbps = c.capacity_mbps();
      row.load_mbps = load[static_cast<std::size_t>(v.link)];
      rep.links.push_back(row);
    }
  }
  return rep;
}

SolveReport run_engine(Engine engine, const Prepared& prepared, const EngineSettings& settings) {
  const auto start = std::chrono::steady_clock::now();
  const auto& inst = prepared.instance;
  std::vector<int> everyone(inst.requests.size());
  for (std::size_t r = 0; r < everyone.size(); ++r) everyone[r] = static_cast<int>(r);
  SolveReport rep;
  switch (engine) {
    case Engine::kIlp: {
      ExactOptions opt;
      opt.budget = settings.exact;
      const auto res = solve_exact(inst, opt);
      rep = res.has_assignment() ? make_report(engine, res.status, prepared, res.assignment, {})
                                 : make_report(engine, res.status, prepared, {}, everyone);
      rep.work = res.nodes_explored;
      break;
    }
    case Engine::kLr: {
      const auto out = solve_lr(inst, settings.lr);
      const auto& res = out.result;
      rep = res.has_assignment() ? make_report(engine, res.status, prepared, res.assignment, {})
                                 : make_report(engine, res.status, prepared, {}, everyone);
      rep.work = out.repair_iterations;
      rep.original_rows = out.original_rows;
      rep.active_after_first = out.active_after_first;
      break;
    }
    case Engine::kPso: {
      if (settings.pso_restarts < 1) throw std::invalid_argument("pso_restarts must be >= 1");
      std::optional<PsoOutcome> best;
      std::int64_t iterations = 0;
      for (int r = 0; r < settings.pso_restarts; ++r) {
        auto config = settings.pso;
        config.seed += static_cast<std::uint64_t>(r);
        auto out = pso_solve(inst, prepared.candidates, config);
        iterations += out.iterations_run;
        if (!best || out.blocked.size() < best->blocked.size() ||
            (out.blocked.size() == best->blocked.size() &&
             out.served_objective < best->served_objective - 1e-9)) {
          best = std::move(out);
        }
      }
      rep = make_report(engine, best->result.status, prepared, best->served, best->blocked);
      rep.work = iterations;
      break;
    }
    case Engine::kFirstFit:
      rep = first_fit_report(prepared, settings.pso);
      break;
  }
  rep.config_json = settings_json(engine, settings);
  rep.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<SolveReport> run_comparison(const Scenario& scenario,
                                        const std::vector<Engine>& engines,
                                        const EngineSettings& settings) {
  if (engines.empty()) throw std::invalid_argument("run_comparison: no engines");
  const auto prepared = prepare(scenario, settings.build);
  std::vector<SolveReport> reports;
  for (Engine e : engines) reports.push_back(run_engine(e, prepared, settings));
  return reports;
}

double blocking_probability(const SolveReport& report) {
  if (report.request_count == 0) return 0.0;
  return static_cast<double>(report.blocked.size()) /
         static_cast<double>(report.request_count);
}

std::vector<std::string> verify_report(const SolveReport& report, const Prepared& prepared) {
  std::vector<std::string> issues;
  const auto& inst = prepared.instance;
  const auto& cs = prepared.candidates;
  std::set<int> blocked(report.blocked.begin(), report.blocked.end());
  for (const auto& c : report.connections) {
    if (c.routed && blocked.count(c.request)) {
      issues.push_back("request " + std::to_string(c.request) + " is routed and blocked");
    }
  }
  if (report.assignment.empty()) {
    if (report.total_power_mw) issues.push_back("power reported without a topology");
    if (blocked.size() != inst.requests.size()) issues.push_back("unserved requests not blocked");
    return issues;
  }
  if (report.assignment.size() != inst.variables.size()) {
    issues.push_back("assignment length mismatch");
    return issues;
  }
  const auto& x = report.assignment;
  double power = 0.0;
  for (const auto& v : inst.variables) {
    if (v.kind == VarKind::kPower && x[static_cast<std::size_t>(v.id)]) {
      power += inst.objective[static_cast<std::size_t>(v.id)];
    }
  }
  if (!report.total_power_mw || std::abs(*report.total_power_mw - power) > 1e-9) {
    issues.push_back("total power differs from recomputation " + std::to_string(power));
  }
  std::vector<int> hops(inst.requests.size(), 0);
  std::vector<double> load(cs.links().size(), 0.0);
  std::vector<double> capacity(cs.links().size(), 0.0);
  for (const auto& v : inst.variables) {
    if (!x[static_cast<std::size_t>(v.id)]) continue;
    if (v.kind == VarKind::kRoute) {
      ++hops[static_cast<std::size_t>(v.request)];
      load[static_cast<std::size_t>(v.link)] +=
          inst.requests[static_cast<std::size_t>(v.request)].min_throughput_mbps;
    } else if (v.kind == VarKind::kSelect) {
      capacity[static_cast<std::size_t>(v.link)] +=
          cs[static_cast<std::size_t>(v.candidate)].capacity_mbps();
    }
  }
  for (std::size_t r = 0; r < inst.requests.size(); ++r) {
    if (blocked.count(static_cast<int>(r))) continue;
    if (hops[r] == 0) issues.push_back("request " + std::to_string(r) + " has no route");
    if (hops[r] > inst.requests[r].max_hops) {
      issues.push_back("request " + std::to_string(r) + " exceeds its hop bound");
    }
  }
  if (report.feasible) {
    for (std::size_t l = 0; l < load.size(); ++l) {
      if (load[l] > capacity[l] + kFeasibilityTolerance) {
        issues.push_back("link " + std::to_string(l) + " overloaded");
      }
    }
  }
  return issues;
}

std::string report_to_json(const SolveReport& report, bool timing, int indent) {
  Json j;
  j["engine"] = engine_label(report.engine);
  j["status"] = status_label(report.status);
  j["feasible"] = report.feasible;
  if (report.total_power_mw) {
    j["total_power_mw"] = *report.total_power_mw;
  } else {
    j["total_power_mw"] = nullptr;
  }
  j["requests"] = report.request_count;
  j["blocked"] = report.blocked;
  j["blocking_probability"] = blocking_probability(report);
  Json conns = Json::array();
  for (const auto& c : report.connections) {
    Json cj;
    cj["request"] = c.request;
    cj["s"] = c.s;
    cj["d"] = c.d;
    cj["max_hops"] = c.max_hops;
    cj["min_throughput_mbps"] = c.min_throughput_mbps;
    cj["routed"] = c.routed;
    cj["path"] = c.path;
    Json hops = Json::array();
    for (const auto& h : c.hops) hops.push_back({{"from", h.from}, {"to", h.to}, {"tx", h.tx}});
    cj["hops"] = std::move(hops);
    conns.push_back(std::move(cj));
  }
  j["connections"] = std::move(conns);
  Json links = Json::array();
  for (const auto& l : report.links) {
    Json lj;
    lj["from"] = l.from;
    lj["to"] = l.to;
    lj["tx"] = l.tx;
    lj["kind"] = l.fso ? "FSO" : "RF";
    lj["power_mw"] = l.power_mw;
    lj["theta_t_mrad"] = l.theta_t_mrad;
    lj["theta_r_mrad"] = l.theta_r_mrad;
    lj["capacity_mbps"] = l.capacity_mbps;
    lj["load_mbps"] = l.load_mbps;
    links.push_back(std::move(lj));
  }
  j["links"] = std::move(links);
  j["work"] = report.work;
  if (report.engine == Engine::kLr) {
    j["original_rows"] = report.original_rows;
    j["active_after_first"] = report.active_after_first;
  }
  j["config"] = report.config_json.empty() ? Json::object() : Json::parse(report.config_json);
  Json flags = Json::object();
  for (const auto& [k, v] : report.flags) flags[k] = v;
  j["flags"] = std::move(flags);
  if (timing) j["runtime_s"] = report.runtime_s;
  return j.dump(indent) + "\n";
}

std::string comparison_to_json(const std::vector<SolveReport>& reports, bool timing) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(Json::parse(report_to_json(r, timing)));
  Json j;
  j["reports"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string export_dot(const SolveReport& report, const Scenario& scenario) {
  std::ostringstream out;
  out << "digraph topology {\n";
  out << "  graph [label=\"" << engine_label(report.engine) << "\"];\n";
  out << "  node [shape=circle];\n";
  for (const auto& n : scenario.nodes) {
    std::ostringstream pos;
    pos << n.position.x << ',' << n.position.y;
    out << "  n" << n.id << " [label=\"" << n.id << "\", pos=\"" << pos.str() << "!\"];\n";
  }
  for (const auto& l : report.links) {
    out << "  n" << l.from << " -> n" << l.to << " [label=\"t" << l.tx << ' ' << l.power_mw
        << " mW";
    if (l.fso) out << ' ' << l.theta_t_mrad << " mrad";
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

void export_dot(const SolveReport& report, const Scenario& scenario, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("export_dot: cannot open " + path);
  file << export_dot(report, scenario);
  if (!file) throw std::runtime_error("export_dot: write failed for " + path);
}

std::vector<SweepRow> run_sweep(const SweepParams& params) {
  if (params.step <= 0 || params.from > params.to || params.seeds <= 0) {
    throw std::invalid_argument("run_sweep: need step > 0, from <= to and seeds > 0");
  }
  if (params.engines.empty()) throw std::invalid_argument("run_sweep: no engines");
  std::vector<SweepRow> rows;
  for (int value = params.from; value <= params.to; value += params.step) {
    for (int s = 0; s < params.seeds; ++s) {
      auto gp = params.base;
      gp.seed = params.base_seed + static_cast<std::uint64_t>(s);
      if (params.axis == SweepAxis::kRequests) {
        gp.requests = value;
      } else {
        gp.transceivers = value;
      }
      const auto scenario = generate_scenario(gp);
      std::optional<Prepared> prepared;
      try {
        prepared = prepare(scenario, params.settings.build);
      } catch (const std::invalid_argument&) {
        // No candidate links at all: every request is blocked.
      }
      for (Engine e : params.engines) {
        SweepRow row;
        row.value = value;
        row.seed = gp.seed;
        row.engine = e;
        row.requests = static_cast<int>(scenario.requests.size());
        if (!prepared) {
          row.status = "NO_CANDIDATES";
          row.blocked = row.requests;
          row.blocking = row.requests > 0 ? 1.0 : 0.0;
          row.total_power_mw = kInf;
          rows.push_back(row);
          continue;
        }
        const auto rep = run_engine(e, *prepared, params.settings);
        row.status = status_label(rep.status);
        row.blocked = static_cast<int>(rep.blocked.size());
        row.blocking = blocking_probability(rep);
        row.total_power_mw = rep.total_power_mw.value_or(kInf);
        row.constraints = prepared->instance.constraints.size();
        row.active_after_first = rep.active_after_first;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "value,seed,engine,status,requests,blocked,blocking,total_power_mw,constraints,"
         "active_after_first\n";
  for (const auto& r : rows) {
    out << r.value << ',' << r.seed << ',' << engine_label(r.engine) << ',' << r.status << ','
        << r.requests << ',' << r.blocked << ',' << r.blocking << ',';
    if (std::isfinite(r.total_power_mw)) {
      out << r.total_power_mw;
    } else {
      out << "inf";
    }
    out << ',' << r.constraints << ',' << r.active_after_first << '\n';
  }
  return out.str();
}

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows) {
  std::map<std::pair<int, int>, SweepSummary> acc;
  for (const auto& r : rows) {
    auto& s = acc[{r.value, static_cast<int>(r.engine)}];
    s.value = r.value;
    s.engine = r.engine;
    ++s.runs;
    s.mean_blocking += r.blocking;
    s.mean_power_mw += r.total_power_mw;
    if (r.engine == Engine::kLr && r.constraints > 0) {
      s.mean_reduction += 1.0 - static_cast<double>(r.active_after_first) /
                                    static_cast<double>(r.constraints);
    }
  }
  std::vector<SweepSummary> out;
  for (auto& [key, s] : acc) {
    s.mean_blocking /= s.runs;
    s.mean_power_mw /= s.runs;
    s.mean_reduction /= s.runs;
    out.push_back(s);
  }
  return out;
}

std::string summary_csv(const std::vector<SweepSummary>& summary) {
  std::ostringstream out;
  out << "value,engine,runs,mean_blocking,mean_power_mw,mean_reduction\n";
  for (const auto& s : summary) {
    out << s.value << ',' << engine_label(s.engine) << ',' << s.runs << ',' << s.mean_blocking
        << ',';
    if (std::isfinite(s.mean_power_mw)) {
      out << s.mean_power_mw;
    } else {
      out << "inf";
    }
    out << ',' << s.mean_reduction << '\n';
  }
  return out.str();
}

}  // namespace fsotopo
