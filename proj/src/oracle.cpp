#include "dof/oracle.hpp"

#include "dof/master.hpp"

namespace dof {

OracleResult solve_ef_exact(std::span<const Order> pending, std::span<const Scenario> scenarios, const Fleet& fleet,
                            const CostParams& params, int epoch, const OracleCaps& caps, int threads) {
  const int M = static_cast<int>(pending.size());
  if (scenarios.empty()) throw ConfigError("at least one scenario is required");
  if (M > caps.max_pending)
    throw SizeLimitError("oracle supports at most " + std::to_string(caps.max_pending) + " pending orders");
  if (static_cast<int>(scenarios.size()) > caps.max_scenarios)
    throw SizeLimitError("oracle supports at most " + std::to_string(caps.max_scenarios) + " scenarios");
  const std::vector<std::uint8_t> none(M, 0);
  if (max_servable_orders(none, scenarios) > caps.max_servable)
    throw SizeLimitError("oracle supports at most " + std::to_string(caps.max_servable) +
                         " servable orders per scenario");

  RecourseOptions opt;
  opt.method = RecourseMethod::kExact;
  opt.exact_cap = caps.max_servable;
  opt.threads = threads;
  const std::vector<std::uint8_t> all(M, 1);
  // Serving everything now minimizes recourse, which bounds every selection.
  const double floor = recourse_average(all, pending, scenarios, fleet, params, epoch, opt).mean_cost;

  OracleResult out;
  out.optimal_objective = kInf;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << M); ++mask) {
    std::vector<std::uint8_t> y(M);
    for (int m = 0; m < M; ++m) y[m] = mask >> m & 1;
    const FirstStagePlan plan = first_stage_routes(y, pending, fleet, params, epoch);
    if (!plan.feasible) continue;
    ++out.feasible_count;
    const double fs = plan.cost.total();
    if (fs + floor >= out.optimal_objective) continue;
    const RecourseAverage r = recourse_average(y, pending, scenarios, fleet, params, epoch, opt);
    ++out.enumerated_count;
    const double z = fs + r.mean_cost;
    if (z < out.optimal_objective) {
      out.optimal_objective = z;
      out.optimal_y0 = y;
      out.first_stage_cost = fs;
      out.per_scenario_recourse = r.per_scenario;
    }
  }
  return out;
}

}  // namespace dof
