// Branch-and-cut over the current-cycle fulfillment decisions with heuristic or
// exact recourse cuts, plus the myopic single-stage solver.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "dof/master.hpp"
#include "dof/scenario.hpp"
#include "dof/subproblem.hpp"

namespace dof {

enum class SolveMode { kTwoTier, kGreedyOnly, kAugmentedOnly, kExact };
const char* to_string(SolveMode m);
SolveMode parse_solve_mode(const std::string& s);  // throws ConfigError
// Recourse tier used to update the incumbent and emit cuts in each mode.
RecourseMethod step_six_tier(SolveMode mode);

// Memoized sample-average recourse per tier, keyed by the selection bit pattern.
class RecourseEvaluator {
 public:
  RecourseEvaluator(std::span<const Order> pending, std::span<const Scenario> scenarios, const Fleet& fleet,
                    const CostParams& params, int epoch, const RecourseOptions& options);

  double evaluate(std::span<const std::uint8_t> y0, RecourseMethod tier);
  int solves(RecourseMethod tier) const { return solves_[static_cast<int>(tier)]; }
  // True when every scenario fits the exact solver with the given selection.
  bool exact_fits(std::span<const std::uint8_t> y0) const;

 private:
  std::vector<Order> pending_;
  std::span<const Scenario> scenarios_;
  Fleet fleet_;
  CostParams params_;
  int epoch_;
  RecourseOptions options_;
  std::map<std::vector<std::uint8_t>, double> memo_[3];
  int solves_[3] = {0, 0, 0};
};

struct LowerBound {
  double value = 0.0;
  RecourseMethod method = RecourseMethod::kExact;
};

// Recourse with every pending order served now: exact when all scenarios fit the
// exact solver (or `require_exact`), augmented otherwise.
LowerBound lower_bound(RecourseEvaluator& evaluator, std::size_t pending_count, bool require_exact = false);

struct MyopicSolution {
  std::vector<std::uint8_t> y0;
  std::vector<Route> routes;
  ItemizedCost first_stage;    // delay of served orders plus routing
  double overflow_cost = 0.0;  // $ overflow charge of unserved orders
  double objective = 0.0;
  bool exact = true;
};

// Minimizes current-cycle cost plus overflow charges of unserved orders. Exact
// subset enumeration up to `cap` orders, greedy insertion beyond.
MyopicSolution solve_myopic(std::span<const Order> pending, const Fleet& fleet, const CostParams& params, int epoch,
                            int cap = 15);

struct WarmStart {
  std::vector<SlimCut> cuts;
  std::vector<std::uint8_t> incumbent;
  FirstStagePlan incumbent_plan;
  double incumbent_recourse = 0.0;
  double incumbent_objective = kInf;
  SolveMode mode = SolveMode::kTwoTier;
};

// Cuts at the all-defer and myopic selections and the myopic incumbent. Switches a
// two-tier run to greedy-only when serving every order now is infeasible.
WarmStart warm_start(RecourseEvaluator& evaluator, std::span<const Order> pending, const Fleet& fleet,
                     const CostParams& params, int epoch, double bound, SolveMode mode);

// One branch-and-cut iteration outcome. `action` is a step label such as
// "step5:greedy_cut"; `estimate` is the recourse value behind it, NaN when none.
struct TraceEvent {
  int iteration = 0;  // LP solves so far
  int node = 0;
  double theta = 0.0;
  double estimate = 0.0;
  double incumbent = 0.0;
  const char* action = "";
};

struct LShapedConfig {
  SolveMode mode = SolveMode::kTwoTier;
  double nu = 0.8;
  RecourseOptions recourse;
  int max_nodes = 100000;
  double time_budget_s = 0.0;  // 0 disables the wall-clock budget
  int master_cap = 10;
  std::function<void(const TraceEvent&)> trace;  // optional
  void validate() const;
};

struct LShapedStats {
  int nodes_created = 0;
  int nodes_processed = 0;
  int greedy_cuts = 0;
  int augmented_cuts = 0;
  int exact_cuts = 0;
  int lp_solves = 0;
  int recourse_evaluations = 0;
  double wall_time_ms = 0.0;
  bool proven = false;
  bool budget_exhausted = false;
};

struct LShapedSolution {
  std::vector<std::uint8_t> y0;
  std::vector<Route> routes;
  ItemizedCost first_stage;
  double recourse = 0.0;
  double objective = 0.0;
  double lower_bound = 0.0;
  SolveMode mode = SolveMode::kTwoTier;
  LShapedStats stats;
};

// Throws SizeLimitError when more than config.master_cap orders are pending.
LShapedSolution run_lshaped(std::span<const Order> pending, std::span<const Scenario> scenarios,
                            const Fleet& fleet, const CostParams& params, int epoch, const LShapedConfig& config);

}  // namespace dof
