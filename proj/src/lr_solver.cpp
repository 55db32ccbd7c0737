#include "fsotopo/lr_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace fsotopo {

namespace {

bool is_dualized(ConstraintClass tag) {
  return tag == ConstraintClass::kBeam || tag == ConstraintClass::kPowerUpper ||
         tag == ConstraintClass::kPowerLower;
}

double row_lhs(const LinearConstraint& row, const std::vector<std::uint8_t>& x) {
  double lhs = 0.0;
  for (const auto& t : row.terms) {
    if (x[static_cast<std::size_t>(t.var)]) lhs += t.coef;
  }
  return lhs;
}

struct DualWorkspace {
  IlpInstance dual;
  std::vector<int> kept;  // dual row -> original row

  DualWorkspace(const IlpInstance& inst, const MultiplierState& ms)
      : dual(build_dual(inst, ms)), kept(retained_rows(inst)) {}
};

// Transmit power of every selection variable, 0 elsewhere. A transceiver
// without an FSO exclusivity row reaches all its receivers with one power
// setting, so its power is split over the receivers reachable at that level.
std::vector<double> selection_power(const IlpInstance& inst) {
  std::vector<std::uint8_t> exclusive(inst.variables.size(), 0);
  for (const auto& row : inst.constraints) {
    if (row.tag != ConstraintClass::kSelectFsoOut) continue;
    for (const auto& t : row.terms) exclusive[static_cast<std::size_t>(t.var)] = 1;
  }
  std::vector<std::vector<int>> receivers(inst.variables.size());
  for (const auto& v : inst.variables) {
    if (v.kind != VarKind::kSelect) continue;
    const int x = inst.power_var(v.node, v.tx, v.power_index);
    if (x >= 0) receivers[static_cast<std::size_t>(x)].push_back(v.to);
  }
  for (auto& r : receivers) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  std::vector<double> power(inst.variables.size(), 0.0);
  for (const auto& v : inst.variables) {
    if (v.kind != VarKind::kSelect) continue;
    const int x = inst.power_var(v.node, v.tx, v.power_index);
    if (x < 0) continue;
    const auto xs = static_cast<std::size_t>(x);
    const double share =
        exclusive[static_cast<std::size_t>(v.id)] ? 1.0 : static_cast<double>(receivers[xs].size());
    power[static_cast<std::size_t>(v.id)] = inst.objective[xs] / share;
  }
  return power;
}

void apply_multipliers(IlpInstance& dual, const IlpInstance& inst,
                       const DualizedRows& rows, const MultiplierState& ms,
                       const std::vector<std::uint8_t>& active,
                       const std::vector<double>& tie_break = {}) {
  dual.objective = inst.objective;
  for (std::size_t v = 0; v < tie_break.size(); ++v) dual.objective[v] += tie_break[v];
  dual.objective_offset = inst.objective_offset;
  auto add = [&](const std::vector<int>& ids, const std::vector<double>& lambda) {
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto r = static_cast<std::size_t>(ids[k]);
      if (!active.empty() && !active[r]) continue;
      const double l = lambda[k];
      if (l == 0.0) continue;
      const auto& row = inst.constraints[r];
      for (const auto& t : row.terms) dual.objective[static_cast<std::size_t>(t.var)] += l * t.coef;
      dual.objective_offset -= l * row.rhs;
    }
  };
  add(rows.beam, ms.lambda1);
  add(rows.power_upper, ms.lambda2);
  add(rows.power_lower, ms.lambda3);
}

}  // namespace

DualizedRows dualized_rows(const IlpInstance& inst) {
  DualizedRows rows;
  for (std::size_t r = 0; r < inst.constraints.size(); ++r) {
    switch (inst.constraints[r].tag) {
      case ConstraintClass::kBeam: rows.beam.push_back(static_cast<int>(r)); break;
      case ConstraintClass::kPowerUpper: rows.power_upper.push_back(static_cast<int>(r)); break;
      case ConstraintClass::kPowerLower: rows.power_lower.push_back(static_cast<int>(r)); break;
      default: break;
    }
  }
  return rows;
}

MultiplierState initial_multipliers(const IlpInstance& inst, double step, int patience) {
  const auto rows = dualized_rows(inst);
  MultiplierState ms;
  ms.lambda1.assign(rows.beam.size(), 0.0);
  ms.lambda2.assign(rows.power_upper.size(), 0.0);
  ms.lambda3.assign(rows.power_lower.size(), 0.0);
  if (step <= 0.0) {
    step = 0.0;
    for (double c : inst.objective) step = std::max(step, c);
    if (step <= 0.0) step = 1.0;
  }
  ms.step = step;
  ms.m = patience;
  return ms;
}

IlpInstance build_dual(const IlpInstance& inst, const MultiplierState& ms) {
  const auto rows = dualized_rows(inst);
  if (ms.lambda1.size() != rows.beam.size() || ms.lambda2.size() != rows.power_upper.size() ||
      ms.lambda3.size() != rows.power_lower.size()) {
    throw std::invalid_argument("build_dual: multiplier lengths do not match dualized rows");
  }
  IlpInstance dual;
  dual.variables = inst.variables;
  dual.node_count = inst.node_count;
  dual.transceiver_counts = inst.transceiver_counts;
  dual.requests = inst.requests;
  dual.scenario_digest = inst.scenario_digest;
  dual.power_base = inst.power_base;
  dual.power_levels = inst.power_levels;
  dual.max_transceivers = inst.max_transceivers;
  for (const auto& row : inst.constraints) {
    if (!is_dualized(row.tag)) dual.constraints.push_back(row);
  }
  apply_multipliers(dual, inst, rows, ms, {});
  return dual;
}

std::vector<int> retained_rows(const IlpInstance& inst) {
  std::vector<int> kept;
  for (std::size_t r = 0; r < inst.constraints.size(); ++r) {
    if (!is_dualized(inst.constraints[r].tag)) kept.push_back(static_cast<int>(r));
  }
  return kept;
}

SolveResult solve_dual_subproblem(const IlpInstance& dual, const SolveBudget& budget) {
  ExactOptions options;
  options.budget = budget;
  return solve_exact(dual, options);
}

void update_multipliers(MultiplierState& ms, const IlpInstance& inst,
                        const std::vector<std::uint8_t>& x, double dual_value,
                        const std::vector<std::uint8_t>& active) {
  const auto rows = dualized_rows(inst);
  auto update = [&](const std::vector<int>& ids, std::vector<double>& lambda) {
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto r = static_cast<std::size_t>(ids[k]);
      if (!active.empty() && !active[r]) continue;
      const auto& row = inst.constraints[r];
      const double excess = row_lhs(row, x) - row.rhs;
      if (excess > kFeasibilityTolerance) {
        lambda[k] += ms.step;
      } else if (excess < -kFeasibilityTolerance) {
        lambda[k] = std::max(0.0, lambda[k] - ms.step);
      }
    }
  };
  update(rows.beam, ms.lambda1);
  update(rows.power_upper, ms.lambda2);
  update(rows.power_lower, ms.lambda3);
  if (dual_value > ms.best_dual + 1e-9) {
    ms.best_dual = dual_value;
    ms.since_improve = 0;
  } else if (++ms.since_improve >= ms.m) {
    ms.step /= 2.0;
    ms.since_improve = 0;
  }
}

RepairState RepairState::fresh(const IlpInstance& inst, int max_iter) {
  RepairState rs;
  rs.fixed.assign(inst.variables.size(), -1);
  rs.active.assign(inst.constraints.size(), 1);
  rs.max_iter = max_iter;
  return rs;
}

std::size_t RepairState::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), 1));
}

LrOutcome iterative_repair(const IlpInstance& inst, MultiplierState& ms, RepairState& rs,
                           const LrConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto rows = dualized_rows(inst);
  DualWorkspace ws(inst, ms);
  LrOutcome out;
  out.original_rows = inst.constraints.size();
  out.active_after_first = inst.constraints.size();
  std::int64_t nodes = 0;
  int trace_iter = 0;

  ExactOptions options;
  options.budget = config.subproblem_budget;
  options.active_rows.resize(ws.kept.size());
  auto tie_break = selection_power(inst);
  {
    const auto selections = static_cast<double>(std::count_if(
        inst.variables.begin(), inst.variables.end(),
        [](const IlpVariable& v) { return v.kind == VarKind::kSelect; }));
    double max_power = 0.0;
    for (double p : tie_break) max_power = std::max(max_power, p);
    const double scale =
        selections > 0 && max_power > 0 ? config.tie_break / (selections * max_power) : 0.0;
    for (double& p : tie_break) p *= scale;
  }
  auto lagrangian_value = [&](const SolveResult& r) {
    double value = r.objective;
    for (std::size_t v = 0; v < tie_break.size(); ++v) {
      if (r.assignment[v]) value -= tie_break[v];
    }
    return value;
  };

  // solveLR: subgradient iterations on the restricted problem. Returns the
  // first iterate feasible for the original instance, else the iterate
  // with the best dual value.
  auto solve_restricted = [&](std::vector<std::uint8_t>& best_x, bool& feasible) {
    for (std::size_t k = 0; k < ws.kept.size(); ++k) {
      options.active_rows[k] = rs.active[static_cast<std::size_t>(ws.kept[k])];
    }
    options.fixed = rs.fixed;
    bool found = false;
    double best_value = -std::numeric_limits<double>::infinity();
    feasible = false;
    for (int it = 0; it < config.dual_iters; ++it) {
      apply_multipliers(ws.dual, inst, rows, ms, rs.active, tie_break);
      const auto r = solve_exact(ws.dual, options);
      nodes += r.nodes_explored;
      if (!r.has_assignment()) break;
      const double value = lagrangian_value(r);
      const auto report = check_feasible(inst, r.assignment);
      out.trace.push_back({++trace_iter, value,
                           static_cast<int>(report.violations.size()), ms.step});
      if (report.feasible()) {
        best_x = r.assignment;
        feasible = true;
        return true;
      }
      if (!found || value > best_value + 1e-9) {
        best_value = value;
        best_x = r.assignment;
        found = true;
      }
      update_multipliers(ms, inst, r.assignment, value, rs.active);
    }
    return found;
  };

  bool success = false;
  std::vector<std::uint8_t> x;
  while (rs.iteration < rs.max_iter) {
    ++rs.iteration;
    bool feasible = false;
    if (!solve_restricted(x, feasible)) {
      if (rs.last_batch.empty() && rs.last_deactivated.empty()) break;
      // One-level backtrack: undo the previous fixing step.
      for (int v : rs.last_batch) rs.fixed[static_cast<std::size_t>(v)] = -1;
      for (int r : rs.last_deactivated) rs.active[static_cast<std::size_t>(r)] = 1;
      rs.last_batch.clear();
      rs.last_deactivated.clear();
      continue;
    }
    if (feasible) {
      success = true;
      break;
    }
    const auto report = check_feasible(inst, x);
    std::vector<std::uint8_t> violated(inst.variables.size(), 0);
    for (const auto& v : report.violations) {
      for (const auto& t : inst.constraints[static_cast<std::size_t>(v.row)].terms) {
        violated[static_cast<std::size_t>(t.var)] = 1;
      }
    }
    rs.last_batch.clear();
    rs.last_deactivated.clear();
    for (std::size_t v = 0; v < violated.size(); ++v) {
      if (!violated[v] && rs.fixed[v] < 0) {
        rs.fixed[v] = static_cast<std::int8_t>(x[v]);
        rs.last_batch.push_back(static_cast<int>(v));
      }
    }
    for (std::size_t r = 0; r < inst.constraints.size(); ++r) {
      if (!rs.active[r]) continue;
      const auto& terms = inst.constraints[r].terms;
      const bool touches = std::any_of(terms.begin(), terms.end(), [&](const Term& t) {
        return violated[static_cast<std::size_t>(t.var)] != 0;
      });
      if (!touches) {
        rs.active[r] = 0;
        rs.last_deactivated.push_back(static_cast<int>(r));
      }
    }
    if (rs.iteration == 1) out.active_after_first = rs.active_count();
  }

  out.repair_iterations = rs.iteration;
  out.best_dual = ms.best_dual;
  out.result.nodes_explored = nodes;
  if (success) {
    out.result.status = SolveStatus::kFeasible;
    out.result.found = true;
    out.result.assignment = x;
    out.result.objective = check_feasible(inst, x).objective;
  } else {
    out.result.status = SolveStatus::kNoFeasibleFound;
  }
  out.result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

LrOutcome solve_lr(const IlpInstance& inst, const LrConfig& config) {
  auto ms = initial_multipliers(inst, config.initial_step, config.patience);
  auto rs = RepairState::fresh(inst, config.max_iter);
  return iterative_repair(inst, ms, rs, config);
}

std::string trace_json_lines(const std::vector<LrTraceEntry>& trace) {
  std::string out;
  for (const auto& e : trace) {
    nlohmann::ordered_json j;
    j["iter"] = e.iter;
    j["dual_value"] = e.dual_value;
    j["violated_count"] = e.violated_count;
    j["step"] = e.step;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace fsotopo
