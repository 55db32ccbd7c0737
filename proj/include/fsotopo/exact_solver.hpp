#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "fsotopo/ilp.hpp"

namespace fsotopo {

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kTimeout,
  kFeasible,         // heuristic engines: every constraint met
  kNoFeasibleFound,  // Lagrangian repair ran out of iterations
  kBlocked,          // swarm result leaves some connections unserved
};

std::string_view status_label(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  bool found = false;  // assignment holds a solution
  std::vector<std::uint8_t> assignment;
  double objective = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  std::int64_t nodes_explored = 0;
  double wall_time_s = 0.0;

  bool has_assignment() const { return found; }
};

// Whichever limit trips first ends the search. With max_seconds left
// infinite the result depends only on the instance and max_nodes.
struct SolveBudget {
  std::int64_t max_nodes = 5'000'000;
  double max_seconds = std::numeric_limits<double>::infinity();
};

struct ExactOptions {
  SolveBudget budget;
  // Optional per-variable preassignment: -1 free, 0 or 1 fixed.
  std::vector<std::int8_t> fixed;
  // Optional row mask; empty means every row is active.
  std::vector<std::uint8_t> active_rows;
};

// Depth-first branch-and-bound over the variables in id order, zero branch
// first, with bound propagation on every row. Among co-optimal assignments
// the lexicographically smallest one is returned.
SolveResult solve_exact(const IlpInstance& inst, const ExactOptions& options = {});

inline constexpr std::size_t kBruteForceMaxVariables = 25;

// Enumerates all 2^n assignments. Throws std::invalid_argument above
// kBruteForceMaxVariables.
SolveResult brute_force(const IlpInstance& inst);

}  // namespace fsotopo
