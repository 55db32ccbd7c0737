#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fsotopo/exact_solver.hpp"
#include "fsotopo/ilp.hpp"

namespace fsotopo {

// Row ids of the relaxed rows in the original instance.
struct DualizedRows {
  std::vector<int> beam;         // multipliers lambda1
  std::vector<int> power_upper;  // multipliers lambda2
  std::vector<int> power_lower;  // multipliers lambda3
};

DualizedRows dualized_rows(const IlpInstance& inst);

struct MultiplierState {
  std::vector<double> lambda1;
  std::vector<double> lambda2;
  std::vector<double> lambda3;
  double step = 1.0;
  int since_improve = 0;
  int m = 5;
  double best_dual = -std::numeric_limits<double>::infinity();
};

// All multipliers at zero. A non-positive step selects the largest
// objective coefficient of the instance.
MultiplierState initial_multipliers(const IlpInstance& inst, double step = 0.0,
                                    int patience = 5);

// Relaxed instance: the power and beam rows leave the constraint set and
// enter the objective as lambda * (lhs - rhs). Variables keep their ids.
// Throws std::invalid_argument when a multiplier vector has the wrong length.
IlpInstance build_dual(const IlpInstance& inst, const MultiplierState& ms);

// Original row id of every row kept by build_dual, in order.
std::vector<int> retained_rows(const IlpInstance& inst);

// Minimizes the relaxed objective with the exact solver.
SolveResult solve_dual_subproblem(const IlpInstance& dual, const SolveBudget& budget);

// One subgradient step. Only rows with a nonzero entry in `active` (or all
// rows when it is empty) are updated.
void update_multipliers(MultiplierState& ms, const IlpInstance& inst,
                        const std::vector<std::uint8_t>& x, double dual_value,
                        const std::vector<std::uint8_t>& active = {});

struct RepairState {
  std::vector<std::int8_t> fixed;     // -1 free, else the fixed bit
  std::vector<std::uint8_t> active;   // per original row
  int iteration = 0;
  int max_iter = 30;
  std::vector<int> last_batch;        // variables fixed by the last iteration
  std::vector<int> last_deactivated;  // rows dropped by the last iteration

  static RepairState fresh(const IlpInstance& inst, int max_iter);
  std::size_t active_count() const;
};

struct LrConfig {
  int max_iter = 30;       // repair iterations
  int dual_iters = 15;     // subgradient iterations per dual solve
  int patience = 5;
  double initial_step = 0.0;  // <= 0: largest objective coefficient
  SolveBudget subproblem_budget{20'000};
  // Total weight of the transmit power of the selected candidates added to
  // the relaxed objective, so that among its minimizers the one with the
  // cheapest links wins. Reported dual values exclude it.
  double tie_break = 1e-4;
};

struct LrTraceEntry {
  int iter = 0;
  double dual_value = 0.0;
  int violated_count = 0;
  double step = 0.0;
};

struct LrOutcome {
  SolveResult result;  // kFeasible or kNoFeasibleFound
  int repair_iterations = 0;
  std::size_t original_rows = 0;
  std::size_t active_after_first = 0;
  double best_dual = -std::numeric_limits<double>::infinity();
  std::vector<LrTraceEntry> trace;
};

// Subgradient iterations followed by iterative repair; the returned
// assignment, when present, satisfies every row of `inst`.
LrOutcome iterative_repair(const IlpInstance& inst, MultiplierState& ms,
                           RepairState& rs, const LrConfig& config = {});

LrOutcome solve_lr(const IlpInstance& inst, const LrConfig& config = {});

// One JSON object per line: {"iter", "dual_value", "violated_count", "step"}.
std::string trace_json_lines(const std::vector<LrTraceEntry>& trace);

}  // namespace fsotopo
