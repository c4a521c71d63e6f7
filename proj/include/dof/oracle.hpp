// Exhaustive solution of the sampled two-stage problem on tiny instances.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dof/scenario.hpp"
#include "dof/subproblem.hpp"

namespace dof {

struct OracleCaps {
  int max_pending = 6;
  int max_servable = 8;
  int max_scenarios = 10;
};

struct OracleResult {
  double optimal_objective = 0.0;
  std::vector<std::uint8_t> optimal_y0;
  double first_stage_cost = 0.0;
  std::vector<double> per_scenario_recourse;
  int enumerated_count = 0;  // selections whose recourse was evaluated
  int feasible_count = 0;    // first-stage feasible selections
};

// Minimizes first-stage cost plus mean exact recourse over every selection of
// pending orders. Throws SizeLimitError when a cap is exceeded.
OracleResult solve_ef_exact(std::span<const Order> pending, std::span<const Scenario> scenarios, const Fleet& fleet,
                            const CostParams& params, int epoch, const OracleCaps& caps = {}, int threads = 1);

}  // namespace dof
