#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsotopo/experiment.hpp"
#include "fsotopo/ilp.hpp"
#include "fsotopo/scenario.hpp"

namespace {

using namespace fsotopo;

void write_file(const std::string& path, const std::string& text) {
  const auto tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

Area parse_area(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw CLI::ValidationError("--area", "expected WxH");
  try {
    return {std::stod(text.substr(0, x)), std::stod(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--area", "expected WxH, got " + text);
  }
}

std::vector<Engine> parse_engines(const std::string& text) {
  std::vector<Engine> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto e = parse_engine(item);
    if (!e) throw CLI::ValidationError("--engines", "unknown engine " + item);
    out.push_back(*e);
  }
  if (out.empty()) throw CLI::ValidationError("--engines", "no engine given");
  return out;
}

// Every option given on the command line, plus the seed override.
std::map<std::string, std::string> echo(const CLI::App& app) {
  std::map<std::string, std::string> flags;
  for (const auto* opt : app.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string joined;
    for (const auto& r : opt->results()) {
      if (!joined.empty()) joined += ',';
      joined += r;
    }
    flags[opt->get_name()] = joined.empty() ? "true" : joined;
  }
  if (const char* env = std::getenv("FSO_TOPOCTL_SEED")) flags["FSO_TOPOCTL_SEED"] = env;
  return flags;
}

std::uint64_t seed_override(std::uint64_t seed) {
  const char* env = std::getenv("FSO_TOPOCTL_SEED");
  if (!env || !*env) return seed;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("FSO_TOPOCTL_SEED is not an integer: ") + env);
  }
}

struct EngineOptions {
  std::int64_t budget_nodes = 5'000'000;
  double budget_secs = 0.0;
  std::uint64_t seed = 1;
  int iterations = 300;
  int population = 30;
  int paths = 10;
  int restarts = 1;
  int lr_iters = 30;
  std::int64_t lr_nodes = 20'000;
  bool tighten = false;

  void add_to(CLI::App* app) {
    app->add_option("--budget-nodes", budget_nodes, "Exact solver node budget")
        ->check(CLI::PositiveNumber);
    app->add_option("--budget-secs", budget_secs, "Exact solver wall-clock budget (0: none)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--seed", seed, "Swarm seed");
    app->add_option("--iterations", iterations, "Swarm iterations")->check(CLI::PositiveNumber);
    app->add_option("--population", population, "Swarm size")->check(CLI::PositiveNumber);
    app->add_option("--restarts", restarts, "Independent swarms, best one reported")
        ->check(CLI::PositiveNumber);
    app->add_option("--paths", paths, "Shortest paths per request in the route table")
        ->check(CLI::PositiveNumber);
    app->add_option("--lr-iters", lr_iters, "Repair iterations")->check(CLI::PositiveNumber);
    app->add_option("--lr-nodes", lr_nodes, "Node budget per relaxed solve")
        ->check(CLI::PositiveNumber);
    app->add_flag("--tighten-big-m", tighten, "Use per-row big-M in the power rows");
  }

  EngineSettings settings() const {
    EngineSettings s;
    s.exact.max_nodes = budget_nodes;
    if (budget_secs > 0) s.exact.max_seconds = budget_secs;
    s.lr.max_iter = lr_iters;
    s.lr.subproblem_budget.max_nodes = lr_nodes;
    s.pso.seed = seed_override(seed);
    s.pso.iterations = iterations;
    s.pso.population = population;
    s.pso.K = paths;
    s.pso_restarts = restarts;
    s.build.tighten_big_m = tighten;
    return s;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topology design for hybrid FSO/RF mesh networks"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Solve one scenario with one engine");
  std::string solve_scenario, solve_engine = "ilp", solve_out, solve_lp, solve_dot;
  bool solve_timing = false;
  EngineOptions solve_opts;
  solve->add_option("scenario", solve_scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--engine", solve_engine, "ilp, lr, pso or firstfit");
  solve->add_option("--out", solve_out, "Report JSON (default stdout)");
  solve->add_option("--lp", solve_lp, "Also write the instance in LP format");
  solve->add_option("--dot", solve_dot, "Also write the topology as DOT");
  solve->add_flag("--timing", solve_timing, "Include runtime in the report");
  solve_opts.add_to(solve);

  auto* gen = app.add_subcommand("gen", "Generate a random scenario");
  GenerateParams gp;
  std::string gen_area = "30x30", gen_out;
  gen->add_option("--nodes", gp.nodes, "Node count")->check(CLI::Range(2, 100000));
  gen->add_option("--area", gen_area, "Area WxH in meters");
  gen->add_option("--requests", gp.requests, "Request count")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gp.seed, "Seed");
  gen->add_option("--transceivers", gp.transceivers, "Transceivers per node (one RF)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--blocked-fraction", gp.blocked_fraction, "Share of pairs without LOS")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", gen_out, "Scenario JSON (default stdout)");
  bool gen_reference = false;
  gen->add_flag("--reference", gen_reference, "Write the fixed 5-node, 8-request instance instead");

  auto* compare = app.add_subcommand("compare", "Run several engines on one scenario");
  std::string cmp_scenario, cmp_engines = "ilp,lr,pso", cmp_out;
  bool cmp_timing = false;
  EngineOptions cmp_opts;
  compare->add_option("scenario", cmp_scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  compare->add_option("--engines", cmp_engines, "Comma separated engines");
  compare->add_option("--out", cmp_out, "Output directory")->required();
  compare->add_flag("--timing", cmp_timing, "Include runtimes in the reports");
  cmp_opts.add_to(compare);

  auto* sweep = app.add_subcommand("sweep", "Blocking, power or row-reduction series as CSV");
  std::string sw_vary = "sd", sw_engines, sw_metric = "blocking", sw_area = "30x30", sw_out,
              sw_summary;
  SweepParams sp;
  sp.base.requests = 15;
  EngineOptions sw_opts;
  sweep->add_option("--vary", sw_vary, "sd or t")->check(CLI::IsMember({"sd", "t"}));
  sweep->add_option("--from", sp.from, "First value")->required();
  sweep->add_option("--to", sp.to, "Last value")->required();
  auto* sw_step = sweep->add_option("--step", sp.step, "Increment (default 5 for sd, 1 for t)")
                      ->check(CLI::PositiveNumber);
  sweep->add_option("--seeds", sp.seeds, "Scenarios per point")->check(CLI::PositiveNumber);
  sweep->add_option("--base-seed", sp.base_seed, "Seed of the first scenario");
  sweep->add_option("--nodes", sp.base.nodes, "Node count")->check(CLI::Range(2, 100000));
  sweep->add_option("--area", sw_area, "Area WxH in meters");
  sweep->add_option("--requests", sp.base.requests, "Request count when varying t");
  sweep->add_option("--transceivers", sp.base.transceivers, "Transceivers when varying sd");
  sweep->add_option("--powers", sp.base.sets.powers_mw, "Power set in mW");
  sweep->add_option("--beams", sp.base.sets.beams_mrad, "Beam set in mrad");
  sweep->add_option("--engines", sw_engines, "Engines (default by metric)");
  sweep->add_option("--metric", sw_metric, "blocking, power or reduction")
      ->check(CLI::IsMember({"blocking", "power", "reduction"}));
  sweep->add_option("--out", sw_out, "Per-run CSV (default stdout)");
  sweep->add_option("--summary", sw_summary, "Per-point means CSV");
  sw_opts.add_to(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const auto engine = parse_engine(solve_engine);
      if (!engine) throw std::invalid_argument("unknown engine " + solve_engine);
      const auto settings = solve_opts.settings();
      const auto prepared = prepare(load_scenario(solve_scenario), settings.build);
      if (!solve_lp.empty()) export_lp(prepared.instance, solve_lp);
      auto report = run_engine(*engine, prepared, settings);
      report.flags = echo(*solve);
      for (const auto& issue : verify_report(report, prepared)) {
        std::cerr << "report check: " << issue << '\n';
      }
      emit(solve_out, report_to_json(report, solve_timing));
      if (!solve_dot.empty()) write_file(solve_dot, export_dot(report, prepared.scenario));
      return report.feasible ? 0 : 2;
    }
    if (*gen) {
      gp.area = parse_area(gen_area);
      gp.seed = seed_override(gp.seed);
      emit(gen_out, scenario_to_json(gen_reference ? reference_scenario() : generate_scenario(gp)));
      return 0;
    }
    if (*compare) {
      const auto engines = parse_engines(cmp_engines);
      const auto settings = cmp_opts.settings();
      const auto prepared = prepare(load_scenario(cmp_scenario), settings.build);
      std::filesystem::create_directories(cmp_out);
      const auto flags = echo(*compare);
      std::vector<SolveReport> reports;
      for (Engine e : engines) {
        auto report = run_engine(e, prepared, settings);
        report.flags = flags;
        for (const auto& issue : verify_report(report, prepared)) {
          std::cerr << engine_label(e) << " report check: " << issue << '\n';
        }
        std::string name(engine_label(e));
        for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        const auto dir = std::filesystem::path(cmp_out);
        write_file((dir / (name + ".jsonl")).string(), report_to_json(report, cmp_timing, -1));
        write_file((dir / (name + ".dot")).string(), export_dot(report, prepared.scenario));
        std::cout << engine_label(e) << ' ' << status_label(report.status) << " power="
                  << (report.total_power_mw ? std::to_string(*report.total_power_mw) : "none")
                  << " blocked=" << report.blocked.size() << '\n';
        reports.push_back(std::move(report));
      }
      write_file((std::filesystem::path(cmp_out) / "comparison.json").string(),
                 comparison_to_json(reports, cmp_timing));
      return 0;
    }
    if (*sweep) {
      sp.axis = sw_vary == "sd" ? SweepAxis::kRequests : SweepAxis::kTransceivers;
      if (sw_step->count() == 0 && sp.axis == SweepAxis::kTransceivers) sp.step = 1;
      sp.base.area = parse_area(sw_area);
      sp.base_seed = seed_override(sp.base_seed);
      sp.settings = sw_opts.settings();
      if (!sw_engines.empty()) {
        sp.engines = parse_engines(sw_engines);
      } else if (sw_metric == "reduction") {
        sp.engines = {Engine::kLr};
      } else if (sw_metric == "power") {
        sp.engines = {Engine::kIlp, Engine::kLr, Engine::kPso};
      } else {
        sp.engines = {Engine::kPso, Engine::kFirstFit};
      }
      if (sw_metric == "reduction") sp.settings.lr.max_iter = 1;
      const auto rows = run_sweep(sp);
      emit(sw_out, sweep_csv(rows));
      if (!sw_summary.empty()) write_file(sw_summary, summary_csv(summarize(rows)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
