// Batch command requests and their in-process execution: instance generation, single
// solves in any mode, benchmark suites, paired simulations and sensitivity sweeps.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dof/bench.hpp"
#include "dof/instance.hpp"
#include "dof/lshaped.hpp"
#include "dof/oracle.hpp"
#include "dof/simulation.hpp"

namespace dof {

struct GenRequest {
  InstanceShape shape;
  std::uint64_t seed = 1;
  Fleet fleet;
  CostParams params;
  void validate() const;
};

// Solve modes accepted by the solve command: the four branch-and-cut modes plus the
// exhaustive oracle and the myopic single-stage decision.
enum class SolveMethod { kTwoTier, kGreedy, kAugmented, kExact, kOracle, kMyopic };
const char* to_string(SolveMethod m);
SolveMethod parse_solve_method(const std::string& s);  // throws ConfigError

struct SolveRequest {
  SolveMethod method = SolveMethod::kTwoTier;
  LShapedConfig solver;  // mode is taken from `method`
  OracleCaps oracle_caps;
  int myopic_cap = 15;
  int scenario_limit = 0;  // use only the first k scenarios; 0 uses all
  int threads = 1;
  void validate() const;
};

struct SolveOutcome {
  SolveMethod method = SolveMethod::kTwoTier;
  double objective = 0.0;
  std::vector<std::uint8_t> y0;
  std::vector<Route> routes;
  ItemizedCost first_stage;
  double recourse = 0.0;     // mean recourse (or overflow charge for myopic)
  double lower_bound = 0.0;  // branch-and-cut modes only
  std::optional<LShapedStats> stats;
  SolveMode resolved_mode = SolveMode::kTwoTier;
  std::vector<double> per_scenario_recourse;  // oracle only
  int enumerated_count = 0;                   // oracle only
  int scenarios_used = 0;
  double wall_time_ms = 0.0;
  // Budget exhausted before the tree was closed.
  bool unproven() const { return stats && stats->budget_exhausted && !stats->proven; }
};

SolveOutcome solve_instance(const Instance& instance, const SolveRequest& request);

struct SimulateRequest {
  SimulationConfig sim;
  PolicyConfig two_stage;
  int replications = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  void validate() const;
};

struct SimulateOutcome {
  std::vector<SimulationRun> single_stage;
  std::vector<SimulationRun> two_stage;
  ComparisonReport report;
};

SimulateOutcome run_simulation(const SimulateRequest& request);

struct SensitivityRequest {
  SimulateRequest base;
  SensitivityAxis axis = SensitivityAxis::kArrivalSd;
  std::vector<double> levels;
  void validate() const;
};

SensitivityReport run_sensitivity(const SensitivityRequest& request);

}  // namespace dof
