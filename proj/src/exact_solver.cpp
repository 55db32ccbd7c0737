#include "fsotopo/exact_solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsotopo {

std::string_view status_label(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "OPTIMAL";
    case SolveStatus::kInfeasible: return "INFEASIBLE";
    case SolveStatus::kTimeout: return "TIMEOUT";
    case SolveStatus::kFeasible: return "FEASIBLE";
    case SolveStatus::kNoFeasibleFound: return "NO_FEASIBLE_SOLUTION";
    case SolveStatus::kBlocked: return "BLOCKED";
  }
  return "UNKNOWN";
}

namespace {

constexpr double kTol = kFeasibilityTolerance;
constexpr double kObjEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

class BranchAndBound {
 public:
  BranchAndBound(const IlpInstance& inst, const ExactOptions& options)
      : inst_(inst), options_(options) {
    build_rows();
    build_structure();
  }

  SolveResult run();

 private:
  struct Row {
    int begin = 0;
    int end = 0;
    Sense sense = Sense::kLe;
    double rhs = 0.0;
    double max_abs = 0.0;
  };
  struct RowTrail {
    int row;
    double fixed;
    double neg;
    double pos;
  };
  struct VarTrail {
    int var;
    double fixed_obj;
    double free_neg_obj;
  };
  struct Decision {
    int var;
    std::size_t var_mark;
    std::size_t row_mark;
    bool second;
  };
  struct LinkInfo {
    int tail = 0;
    int tx = 0;
    std::vector<int> gvars;
    int single_row = -1;  // active row allowing at most one candidate
    int out_row = -1;     // active FSO transmit selector
    int in_row = -1;      // active FSO receive selector
    bool has_throughput = false;
  };
  struct RouteArc {
    int var;
    int link;
    int from;
    int to;
    bool link_row_active;
  };

  void build_rows();
  void build_structure();
  void fix(int var, int value);
  void undo_to(std::size_t var_mark, std::size_t row_mark);
  bool propagate();
  bool structural_bound(double& lower_bound);
  double link_cost(int link);

  const IlpInstance& inst_;
  const ExactOptions& options_;
  int nvars_ = 0;

  std::vector<Row> rows_;
  std::vector<int> rvar_;
  std::vector<double> rcoef_;
  std::vector<int> cbegin_;
  std::vector<int> crow_;
  std::vector<double> ccoef_;

  std::vector<double> fixed_sum_, neg_free_, pos_free_;
  std::vector<std::int8_t> value_;
  double fixed_obj_ = 0.0;
  double free_neg_obj_ = 0.0;
  std::vector<VarTrail> var_trail_;
  std::vector<RowTrail> row_trail_;
  std::vector<int> queue_;
  std::vector<std::uint8_t> queued_;

  // Topology structure derived from the variable kinds and the active rows.
  std::vector<LinkInfo> links_;
  std::vector<std::vector<RouteArc>> request_arcs_;
  std::vector<std::uint8_t> request_structured_;
  std::vector<int> hop_limit_;
  std::vector<int> coupled_x_;
  std::vector<double> g_capacity_;
  // Per-node scratch.
  std::vector<std::uint8_t> avail_, selected_, required_, grouped_;
  std::vector<double> demand_, cost_cache_;
  std::vector<int> cost_stamp_, row_count_;
  std::vector<int> touched_rows_;
  int stamp_ = 0;
  std::vector<double> dist_, next_dist_;
};

void BranchAndBound::build_rows() {
  nvars_ = static_cast<int>(inst_.variables.size());
  const auto& active = options_.active_rows;
  std::vector<int> col_count(static_cast<std::size_t>(nvars_) + 1, 0);
  for (std::size_t r = 0; r < inst_.constraints.size(); ++r) {
    if (!active.empty() && !active[r]) continue;
    const auto& c = inst_.constraints[r];
    Row row;
    row.begin = static_cast<int>(rvar_.size());
    row.sense = c.sense;
    row.rhs = c.rhs;
    for (const auto& t : c.terms) {
      if (t.coef == 0.0) continue;
      rvar_.push_back(t.var);
      rcoef_.push_back(t.coef);
      row.max_abs = std::max(row.max_abs, std::abs(t.coef));
      ++col_count[static_cast<std::size_t>(t.var) + 1];
    }
    row.end = static_cast<int>(rvar_.size());
    rows_.push_back(row);
  }
  cbegin_.assign(static_cast<std::size_t>(nvars_) + 1, 0);
  for (int v = 0; v < nvars_; ++v) {
    cbegin_[static_cast<std::size_t>(v) + 1] =
        cbegin_[static_cast<std::size_t>(v)] + col_count[static_cast<std::size_t>(v) + 1];
  }
  crow_.resize(rvar_.size());
  ccoef_.resize(rvar_.size());
  std::vector<int> fill(cbegin_.begin(), cbegin_.end() - 1);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (int k = rows_[r].begin; k < rows_[r].end; ++k) {
      const int v = rvar_[static_cast<std::size_t>(k)];
      const auto pos = static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++);
      crow_[pos] = static_cast<int>(r);
      ccoef_[pos] = rcoef_[static_cast<std::size_t>(k)];
    }
  }
  fixed_sum_.assign(rows_.size(), 0.0);
  neg_free_.assign(rows_.size(), 0.0);
  pos_free_.assign(rows_.size(), 0.0);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (int k = rows_[r].begin; k < rows_[r].end; ++k) {
      const double a = rcoef_[static_cast<std::size_t>(k)];
      neg_free_[r] += std::min(0.0, a);
      pos_free_[r] += std::max(0.0, a);
    }
  }
  value_.assign(static_cast<std::size_t>(nvars_), -1);
  for (int v = 0; v < nvars_; ++v) {
    free_neg_obj_ += std::min(0.0, inst_.objective[static_cast<std::size_t>(v)]);
  }
  queued_.assign(rows_.size(), 0);
}

void BranchAndBound::build_structure() {
  int link_count = 0;
  for (const auto& v : inst_.variables) {
    if (v.kind != VarKind::kPower) link_count = std::max(link_count, v.link + 1);
  }
  links_.assign(static_cast<std::size_t>(link_count), {});
  const int requests = static_cast<int>(inst_.requests.size());
  request_arcs_.assign(static_cast<std::size_t>(requests), {});
  coupled_x_.assign(static_cast<std::size_t>(nvars_), -1);
  g_capacity_.assign(static_cast<std::size_t>(nvars_), 0.0);
  std::vector<int> route_var_index(static_cast<std::size_t>(nvars_), -1);
  for (const auto& v : inst_.variables) {
    if (v.kind == VarKind::kSelect) {
      auto& info = links_[static_cast<std::size_t>(v.link)];
      info.tail = v.node;
      info.tx = v.tx;
      info.gvars.push_back(v.id);
    } else if (v.kind == VarKind::kRoute) {
      auto& info = links_[static_cast<std::size_t>(v.link)];
      info.tail = v.node;
      info.tx = v.tx;
      auto& arcs = request_arcs_[static_cast<std::size_t>(v.request)];
      route_var_index[static_cast<std::size_t>(v.id)] = static_cast<int>(arcs.size());
      arcs.push_back({v.id, v.link, v.node, v.to, false});
    }
  }

  std::vector<int> flow_rows(static_cast<std::size_t>(requests), 0);
  hop_limit_.assign(static_cast<std::size_t>(requests), std::max(inst_.node_count - 1, 1));
  const auto& active = options_.active_rows;
  int compact = 0;
  for (std::size_t r = 0; r < inst_.constraints.size(); ++r) {
    if (!active.empty() && !active[r]) continue;
    const int row_id = compact++;
    const auto& c = inst_.constraints[r];
    const bool per_request = c.request >= 0 && c.request < requests;
    if (!per_request && (c.tag == ConstraintClass::kRouteFlow ||
                         c.tag == ConstraintClass::kDelay)) {
      continue;
    }
    switch (c.tag) {
      case ConstraintClass::kRouteFlow:
        ++flow_rows[static_cast<std::size_t>(c.request)];
        break;
      case ConstraintClass::kDelay:
        hop_limit_[static_cast<std::size_t>(c.request)] =
            std::min(hop_limit_[static_cast<std::size_t>(c.request)],
                     static_cast<int>(std::floor(c.rhs + kTol)));
        break;
      case ConstraintClass::kRouteLink:
        for (const auto& t : c.terms) {
          const auto& v = inst_.variables[static_cast<std::size_t>(t.var)];
          if (v.kind == VarKind::kRoute) {
            auto& arcs = request_arcs_[static_cast<std::size_t>(v.request)];
            arcs[static_cast<std::size_t>(route_var_index[static_cast<std::size_t>(v.id)])]
                .link_row_active = true;
          }
        }
        break;
      case ConstraintClass::kThroughput:
        for (const auto& t : c.terms) {
          const auto& v = inst_.variables[static_cast<std::size_t>(t.var)];
          if (v.kind == VarKind::kSelect) {
            g_capacity_[static_cast<std::size_t>(v.id)] = -t.coef;
            links_[static_cast<std::size_t>(v.link)].has_throughput = true;
          }
        }
        break;
      case ConstraintClass::kPowerUpper: {
        int x = -1;
        for (const auto& t : c.terms) {
          if (inst_.variables[static_cast<std::size_t>(t.var)].kind == VarKind::kPower) x = t.var;
        }
        if (x < 0) break;
        for (const auto& t : c.terms) {
          if (t.var != x) coupled_x_[static_cast<std::size_t>(t.var)] = x;
        }
        break;
      }
      case ConstraintClass::kSelectFsoOut:
      case ConstraintClass::kSelectFsoIn:
      case ConstraintClass::kSelectRf:
        for (const auto& t : c.terms) {
          const auto& v = inst_.variables[static_cast<std::size_t>(t.var)];
          if (v.kind != VarKind::kSelect) continue;
          auto& info = links_[static_cast<std::size_t>(v.link)];
          if (c.tag == ConstraintClass::kSelectFsoIn) {
            info.in_row = row_id;
          } else {
            info.single_row = row_id;
            if (c.tag == ConstraintClass::kSelectFsoOut) info.out_row = row_id;
          }
        }
        break;
      default:
        break;
    }
  }
  request_structured_.assign(static_cast<std::size_t>(requests), 0);
  for (int r = 0; r < requests; ++r) {
    request_structured_[static_cast<std::size_t>(r)] =
        flow_rows[static_cast<std::size_t>(r)] == inst_.node_count;
  }
  avail_.assign(links_.size(), 0);
  selected_.assign(links_.size(), 0);
  required_.assign(links_.size(), 0);
  demand_.assign(links_.size(), 0.0);
  cost_cache_.assign(links_.size(), 0.0);
  cost_stamp_.assign(links_.size(), -1);
  row_count_.assign(rows_.size(), 0);
  const int max_t = std::max(inst_.max_transceivers, 1);
  grouped_.assign(static_cast<std::size_t>(std::max(inst_.node_count, 1) * max_t), 0);
  dist_.assign(static_cast<std::size_t>(std::max(inst_.node_count, 1)), kInf);
  next_dist_ = dist_;
}

void BranchAndBound::fix(int var, int value) {
  const auto v = static_cast<std::size_t>(var);
  var_trail_.push_back({var, fixed_obj_, free_neg_obj_});
  value_[v] = static_cast<std::int8_t>(value);
  const double c = inst_.objective[v];
  free_neg_obj_ -= std::min(0.0, c);
  if (value) fixed_obj_ += c;
  for (int k = cbegin_[v]; k < cbegin_[v + 1]; ++k) {
    const auto r = static_cast<std::size_t>(crow_[static_cast<std::size_t>(k)]);
    const double a = ccoef_[static_cast<std::size_t>(k)];
    row_trail_.push_back({static_cast<int>(r), fixed_sum_[r], neg_free_[r], pos_free_[r]});
    if (value) fixed_sum_[r] += a;
    neg_free_[r] -= std::min(0.0, a);
    pos_free_[r] -= std::max(0.0, a);
    if (!queued_[r]) {
      queued_[r] = 1;
      queue_.push_back(static_cast<int>(r));
    }
  }
}

void BranchAndBound::undo_to(std::size_t var_mark, std::size_t row_mark) {
  while (row_trail_.size() > row_mark) {
    const auto& t = row_trail_.back();
    const auto r = static_cast<std::size_t>(t.row);
    fixed_sum_[r] = t.fixed;
    neg_free_[r] = t.neg;
    pos_free_[r] = t.pos;
    row_trail_.pop_back();
  }
  while (var_trail_.size() > var_mark) {
    const auto& t = var_trail_.back();
    value_[static_cast<std::size_t>(t.var)] = -1;
    fixed_obj_ = t.fixed_obj;
    free_neg_obj_ = t.free_neg_obj;
    var_trail_.pop_back();
  }
}

bool BranchAndBound::propagate() {
  std::size_t head = 0;
  bool ok = true;
  while (head < queue_.size()) {
    const auto r = static_cast<std::size_t>(queue_[head++]);
    queued_[r] = 0;
    const Row& row = rows_[r];
    const double min_act = fixed_sum_[r] + neg_free_[r];
    const double max_act = fixed_sum_[r] + pos_free_[r];
    const bool upper = row.sense != Sense::kGe;
    const bool lower = row.sense != Sense::kLe;
    if ((upper && min_act > row.rhs + kTol) || (lower && max_act < row.rhs - kTol)) {
      ok = false;
      break;
    }
    const bool scan_upper = upper && row.max_abs > row.rhs + kTol - min_act;
    const bool scan_lower = lower && row.max_abs > max_act - row.rhs + kTol;
    if (!scan_upper && !scan_lower) continue;
    for (int k = row.begin; k < row.end; ++k) {
      const int v = rvar_[static_cast<std::size_t>(k)];
      if (value_[static_cast<std::size_t>(v)] >= 0) continue;
      const double a = rcoef_[static_cast<std::size_t>(k)];
      int forced = -1;
      if (scan_upper) {
        if (a > 0 && min_act + a > row.rhs + kTol) forced = 0;
        if (a < 0 && min_act - a > row.rhs + kTol) forced = 1;
      }
      if (scan_lower && forced < 0) {
        if (a > 0 && max_act - a < row.rhs - kTol) forced = 1;
        if (a < 0 && max_act + a < row.rhs - kTol) forced = 0;
      }
      if (forced >= 0) fix(v, forced);
    }
  }
  if (!ok) {
    for (int r : queue_) queued_[static_cast<std::size_t>(r)] = 0;
  }
  queue_.clear();
  return ok;
}

double BranchAndBound::link_cost(int link) {
  const auto l = static_cast<std::size_t>(link);
  if (cost_stamp_[l] == stamp_) return cost_cache_[l];
  double best = kInf;
  for (int g : links_[l].gvars) {
    const auto gi = static_cast<std::size_t>(g);
    if (value_[gi] == 0) continue;
    double cost = value_[gi] == 1 ? 0.0 : std::max(0.0, inst_.objective[gi]);
    const int x = coupled_x_[gi];
    if (x >= 0) {
      const auto xi = static_cast<std::size_t>(x);
      if (value_[xi] == 0) continue;
      if (value_[xi] < 0) cost += std::max(0.0, inst_.objective[xi]);
    }
    best = std::min(best, cost);
  }
  cost_stamp_[l] = stamp_;
  cost_cache_[l] = best;
  return best;
}

// Checks necessary conditions implied by the routing rows and returns a
// lower bound on the objective of any completion.
bool BranchAndBound::structural_bound(double& lower_bound) {
  ++stamp_;
  lower_bound = fixed_obj_ + free_neg_obj_ + inst_.objective_offset;
  if (request_arcs_.empty()) return true;
  for (std::size_t l = 0; l < links_.size(); ++l) {
    avail_[l] = 0;
    selected_[l] = 0;
    required_[l] = 0;
    demand_[l] = 0.0;
    for (int g : links_[l].gvars) {
      const auto v = value_[static_cast<std::size_t>(g)];
      if (v != 0) avail_[l] = 1;
      if (v == 1) selected_[l] = 1;
    }
  }
  for (std::size_t r = 0; r < request_arcs_.size(); ++r) {
    const double th = inst_.requests[r].min_throughput_mbps;
    for (const auto& arc : request_arcs_[r]) {
      if (value_[static_cast<std::size_t>(arc.var)] != 1 || !arc.link_row_active) continue;
      const auto l = static_cast<std::size_t>(arc.link);
      if (!avail_[l]) return false;
      required_[l] = 1;
      if (links_[l].has_throughput) demand_[l] += th;
    }
  }
  const int max_t = std::max(inst_.max_transceivers, 1);
  std::fill(grouped_.begin(), grouped_.end(), 0);
  touched_rows_.clear();
  // Transceivers known to transmit; each contributes its cheapest way to
  // serve its most expensive required link.
  std::vector<std::pair<std::size_t, double>> group_cost;
  double required_sum = 0.0;
  bool ok = true;
  for (std::size_t l = 0; l < links_.size() && ok; ++l) {
    if (!required_[l]) continue;
    const auto& info = links_[l];
    if (info.single_row >= 0 && info.has_throughput) {
      double cap = 0.0;
      for (int g : info.gvars) {
        if (value_[static_cast<std::size_t>(g)] != 0) {
          cap = std::max(cap, g_capacity_[static_cast<std::size_t>(g)]);
        }
      }
      if (demand_[l] > cap + kTol) ok = false;
    }
    for (int row : {info.out_row, info.in_row}) {
      if (row < 0) continue;
      if (row_count_[static_cast<std::size_t>(row)]++ == 0) touched_rows_.push_back(row);
      if (row_count_[static_cast<std::size_t>(row)] > 1) ok = false;
    }
    const auto slot = static_cast<std::size_t>(info.tail * max_t + info.tx);
    const double cost = selected_[l] ? 0.0 : link_cost(static_cast<int>(l));
    if (cost == kInf) ok = false;
    if (!grouped_[slot]) {
      grouped_[slot] = 1;
      group_cost.emplace_back(slot, cost);
    } else {
      for (auto& [s, c] : group_cost) {
        if (s == slot) c = std::max(c, cost);
      }
    }
  }
  for (int row : touched_rows_) row_count_[static_cast<std::size_t>(row)] = 0;
  if (!ok) return false;
  for (const auto& [slot, c] : group_cost) required_sum += c;

  double path_bound = 0.0;
  for (std::size_t r = 0; r < request_arcs_.size(); ++r) {
    if (!request_structured_[r]) continue;
    const auto& arcs = request_arcs_[r];
    bool open = false;
    for (const auto& arc : arcs) {
      if (value_[static_cast<std::size_t>(arc.var)] < 0) {
        open = true;
        break;
      }
    }
    const auto& q = inst_.requests[r];
    std::fill(dist_.begin(), dist_.end(), kInf);
    dist_[static_cast<std::size_t>(q.s)] = 0.0;
    double best = kInf;
    for (int h = 0; h < hop_limit_[r]; ++h) {
      next_dist_ = dist_;
      bool changed = false;
      for (const auto& arc : arcs) {
        const double from = dist_[static_cast<std::size_t>(arc.from)];
        if (from == kInf) continue;
        if (value_[static_cast<std::size_t>(arc.var)] == 0) continue;
        const auto l = static_cast<std::size_t>(arc.link);
        double cost = 0.0;
        if (arc.link_row_active) {
          if (!avail_[l]) continue;
          const auto slot = static_cast<std::size_t>(links_[l].tail * max_t + links_[l].tx);
          if (open && !selected_[l] && !grouped_[slot]) cost = link_cost(arc.link);
          if (cost == kInf) continue;
        }
        auto& to = next_dist_[static_cast<std::size_t>(arc.to)];
        if (from + cost < to) {
          to = from + cost;
          changed = true;
        }
      }
      dist_.swap(next_dist_);
      best = std::min(best, dist_[static_cast<std::size_t>(q.d)]);
      if (!changed) break;
    }
    if (best == kInf) return false;
    path_bound = std::max(path_bound, best);
  }
  lower_bound += required_sum + path_bound;
  return true;
}

SolveResult BranchAndBound::run() {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  bool ok = true;
  if (!options_.fixed.empty()) {
    if (options_.fixed.size() != static_cast<std::size_t>(nvars_)) {
      throw std::invalid_argument("solve_exact: fixed vector length mismatch");
    }
    for (int v = 0; v < nvars_; ++v) {
      const auto f = options_.fixed[static_cast<std::size_t>(v)];
      if (f >= 0 && value_[static_cast<std::size_t>(v)] < 0) fix(v, f ? 1 : 0);
    }
  }
  // Variables outside every active row take their cheapest value.
  for (int v = 0; v < nvars_; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    if (value_[vi] < 0 && cbegin_[vi] == cbegin_[vi + 1]) {
      fix(v, inst_.objective[vi] < 0.0 ? 1 : 0);
    }
  }
  // Every row is checked once at the root.
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (!queued_[r]) {
      queued_[r] = 1;
      queue_.push_back(static_cast<int>(r));
    }
  }
  ok = propagate();

  bool have_incumbent = false;
  double best = kInf;
  std::vector<std::uint8_t> incumbent;
  double root_bound = -kInf;
  bool timed_out = false;

  auto evaluate = [&]() {
    double lb = 0.0;
    if (!structural_bound(lb)) return false;
    if (have_incumbent && lb >= best - kObjEps) return false;
    return true;
  };
  if (ok) {
    double lb = 0.0;
    ok = structural_bound(lb);
    root_bound = lb;
  }

  std::vector<Decision> stack;
  bool backtrack = !ok;
  std::int64_t nodes = 0;
  while (true) {
    if (!backtrack) {
      int next = -1;
      for (int v = stack.empty() ? 0 : stack.back().var + 1; v < nvars_; ++v) {
        if (value_[static_cast<std::size_t>(v)] < 0) {
          next = v;
          break;
        }
      }
      if (next < 0) {
        const double obj = fixed_obj_ + inst_.objective_offset;
        if (!have_incumbent || obj < best - kObjEps) {
          have_incumbent = true;
          best = obj;
          incumbent.assign(value_.begin(), value_.end());
        }
        backtrack = true;
        continue;
      }
      if (nodes >= options_.budget.max_nodes ||
          ((nodes & 255) == 0 && elapsed() > options_.budget.max_seconds)) {
        timed_out = true;
        break;
      }
      ++nodes;
      stack.push_back({next, var_trail_.size(), row_trail_.size(), false});
      fix(next, 0);
      backtrack = !propagate() || !evaluate();
      continue;
    }
    while (!stack.empty() && stack.back().second) {
      undo_to(stack.back().var_mark, stack.back().row_mark);
      stack.pop_back();
    }
    if (stack.empty()) break;
    if (nodes >= options_.budget.max_nodes ||
        ((nodes & 255) == 0 && elapsed() > options_.budget.max_seconds)) {
      timed_out = true;
      break;
    }
    auto& top = stack.back();
    undo_to(top.var_mark, top.row_mark);
    top.second = true;
    ++nodes;
    fix(top.var, 1);
    backtrack = !propagate() || !evaluate();
  }

  result.nodes_explored = nodes;
  if (have_incumbent) {
    result.found = true;
    result.assignment = std::move(incumbent);
    result.objective = best;
  }
  if (timed_out) {
    result.status = SolveStatus::kTimeout;
    result.lower_bound = root_bound;
  } else if (have_incumbent) {
    result.status = SolveStatus::kOptimal;
    result.lower_bound = best;
  } else {
    result.status = SolveStatus::kInfeasible;
  }
  result.wall_time_s = elapsed();
  return result;
}

}  // namespace

SolveResult solve_exact(const IlpInstance& inst, const ExactOptions& options) {
  BranchAndBound search(inst, options);
  return search.run();
}

SolveResult brute_force(const IlpInstance& inst) {
  const std::size_t n = inst.variables.size();
  if (n > kBruteForceMaxVariables) {
    throw std::invalid_argument("brute_force: " + std::to_string(n) +
                                " variables exceeds the cap of " +
                                std::to_string(kBruteForceMaxVariables));
  }
  const auto start = std::chrono::steady_clock::now();
  const ColumnIndex columns(inst);
  std::vector<std::uint8_t> current(n, 0);
  std::vector<double> activity(inst.constraints.size(), 0.0);
  std::size_t violated = 0;
  for (std::size_t r = 0; r < inst.constraints.size(); ++r) {
    if (row_violation(inst.constraints[r], 0.0) > 0.0) ++violated;
  }
  double objective = inst.objective_offset;

  SolveResult result;
  auto consider = [&] {
    if (violated != 0) return;
    if (!result.has_assignment() || objective < result.objective - kObjEps ||
        (objective <= result.objective + kObjEps && current < result.assignment)) {
      result.found = true;
      result.objective = objective;
      result.assignment = current;
    }
  };
  consider();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    // Gray code: flip the variable at the lowest set bit of `step`.
    const auto v = static_cast<std::size_t>(std::countr_zero(step));
    const bool on = !current[v];
    current[v] = on;
    objective += on ? inst.objective[v] : -inst.objective[v];
    for (int k = columns.begin[v]; k < columns.begin[v + 1]; ++k) {
      const auto r = static_cast<std::size_t>(columns.rows[static_cast<std::size_t>(k)]);
      const auto& row = inst.constraints[r];
      const bool before = row_violation(row, activity[r]) > 0.0;
      activity[r] += on ? columns.coefs[static_cast<std::size_t>(k)]
                        : -columns.coefs[static_cast<std::size_t>(k)];
      const bool after = row_violation(row, activity[r]) > 0.0;
      if (before != after) {
        if (after) ++violated; else --violated;
      }
    }
    consider();
  }
  result.nodes_explored = static_cast<std::int64_t>(total);
  if (result.has_assignment()) {
    // Recompute the objective exactly for the winning assignment.
    result.objective = check_feasible(inst, result.assignment).objective;
    result.status = SolveStatus::kOptimal;
    result.lower_bound = result.objective;
  } else {
    result.status = SolveStatus::kInfeasible;
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace fsotopo
