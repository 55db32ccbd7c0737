#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsotopo/link_enumeration.hpp"
#include "fsotopo/network.hpp"

namespace fsotopo {

enum class VarKind {
  kPower,   // x(i, t, p)
  kSelect,  // g(i, j, t, p, theta_t, theta_r)
  kRoute,   // l(i, j, t, s, d)
};

struct IlpVariable {
  int id = 0;
  VarKind kind = VarKind::kPower;
  int node = 0;
  int to = -1;           // kSelect, kRoute
  int tx = 0;
  int power_index = -1;  // kPower, kSelect
  int candidate = -1;    // kSelect: index into the CandidateSet
  int link = -1;         // kSelect, kRoute: index into CandidateSet::links()
  int request = -1;      // kRoute
};

enum class Sense { kLe, kEq, kGe };

enum class ConstraintClass {
  kRouteFlow,     // flow conservation per request and node
  kRouteLink,     // route uses only selected links
  kDelay,         // hop bound
  kThroughput,    // carried load within link capacity
  kPowerUpper,    // selection implies the power indicator
  kPowerLower,    // power indicator implies a selection
  kSelectFsoOut,  // one outgoing FSO partner
  kSelectFsoIn,   // one incoming FSO partner
  kSelectRf,      // one RF setting per transceiver
  kBeam,          // matching beam openings on both ends
  kAlignA,        // send and receive aimed at one partner
  kAlignB,        // no third node inside the aimed sector
};
inline constexpr int kConstraintClassCount = 12;

std::string_view class_label(ConstraintClass c);

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
  ConstraintClass tag = ConstraintClass::kRouteFlow;
  int request = -1;  // request a per-connection row belongs to
  std::string name;
};

struct IlpInstance {
  std::vector<IlpVariable> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<double> objective;  // dense, one coefficient per variable
  double objective_offset = 0.0;
  int node_count = 0;
  std::vector<int> transceiver_counts;  // per node
  std::vector<QosRequest> requests;
  std::string scenario_digest;

  std::size_t size() const { return variables.size(); }
  std::array<std::size_t, kConstraintClassCount> class_counts() const;
  // Id of x(i, t, p); -1 when the transceiver has no such power level.
  int power_var(int node, int tx, int power_index) const;

  // power_var lookup table: offsets per (node, tx) into contiguous ids.
  std::vector<int> power_base;
  std::vector<int> power_levels;
  int max_transceivers = 0;
};

struct BuildOptions {
  // Replace the big-M N in the power upper rows by the number of candidates
  // in the row.
  bool tighten_big_m = false;
};

IlpInstance build_instance(const Scenario& scenario, const CandidateSet& cs,
                           const std::vector<QosRequest>& requests,
                           const BuildOptions& options = {});

// Closed-form sizes of the formulation as functions of
// (N, |SD|, |T|, |P|, |Phi|).
std::int64_t count_variables(std::int64_t n, std::int64_t sd, std::int64_t t,
                             std::int64_t p, std::int64_t phi);
std::int64_t count_constraints(std::int64_t n, std::int64_t sd, std::int64_t t,
                               std::int64_t p, std::int64_t phi);

inline constexpr double kFeasibilityTolerance = 1e-6;

struct Violation {
  int row = 0;
  double lhs = 0.0;
  double slack = 0.0;  // rhs - lhs for <=, lhs - rhs for >=, -|lhs - rhs| for =
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  double objective = 0.0;
  bool feasible() const { return violations.empty(); }
};

struct CheckOptions {
  double tolerance = kFeasibilityTolerance;
  // Rows tied to these requests are not checked.
  std::vector<int> skip_requests;
};

// Evaluates every row directly from the terms. Throws std::invalid_argument
// when the assignment length does not match.
FeasibilityReport check_feasible(const IlpInstance& inst,
                                 std::span<const std::uint8_t> assignment,
                                 const CheckOptions& options = {});

// Column-major view of the constraint matrix.
struct ColumnIndex {
  std::vector<int> begin;  // size = variables + 1
  std::vector<int> rows;
  std::vector<double> coefs;

  explicit ColumnIndex(const IlpInstance& inst);
};

// Row activities for a sparse 0/1 assignment, computed column-wise.
std::vector<double> row_activities(const IlpInstance& inst,
                                   const ColumnIndex& columns,
                                   std::span<const std::uint8_t> assignment);

// Amount by which `activity` misses the row; 0 when satisfied within tol.
double row_violation(const LinearConstraint& row, double activity,
                     double tolerance = kFeasibilityTolerance);

// Feasibility check that only touches the rows of the set variables plus the
// rows violated by the all-zero assignment. Holds scratch state, so one
// instance per thread.
class SparseChecker {
 public:
  explicit SparseChecker(const IlpInstance& inst);

  // `ones` lists the variables set to 1, each at most once.
  FeasibilityReport check(const std::vector<int>& ones,
                          const CheckOptions& options = {}) const;

 private:
  const IlpInstance* inst_;
  ColumnIndex columns_;
  std::vector<int> zero_violated_;
  mutable std::vector<double> activity_;
  mutable std::vector<std::uint8_t> touched_;
  mutable std::vector<int> touched_rows_;
};

struct Admission {
  std::vector<std::uint8_t> admitted;  // per request
  std::vector<std::uint8_t> assignment;
  double objective = 0.0;
};

// Greedy admission in `order`: a request is admitted when the topology made
// of the links on the routes of the admitted requests (selections as in
// `assignment`, power indicators recomputed) satisfies every row not tied to
// a rejected request.
Admission admit_requests(const IlpInstance& inst,
                         std::span<const std::uint8_t> assignment,
                         const std::vector<int>& order);

std::string variable_name(const IlpVariable& v);

void export_lp(const IlpInstance& inst, std::ostream& out);
void export_lp(const IlpInstance& inst, const std::string& path);

// {variables, constraints, per_class_counts, formula_W, formula_Z}
std::string instance_summary_json(const IlpInstance& inst, int sets_powers,
                                  int sets_beams);

}  // namespace fsotopo
