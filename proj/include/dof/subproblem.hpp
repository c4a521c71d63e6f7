// Second-stage recourse: one scenario's future cycles as a capacitated VRP with
// per-cycle vehicle copies, solved greedily, by guided local search, or exactly.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dof/model.hpp"
#include "dof/routing.hpp"
#include "dof/scenario.hpp"

namespace dof {

struct SubOrder {
  Order order;
  bool carried = false;   // deferred from the current cycle
  int earliest = 1;       // first servable relative cycle
  int window_first = 1;   // soft window (relative cycles, inclusive)
  int window_last = 1;
  std::vector<double> serve_cost;  // $ delay charge when served in relative cycle t (index t-1)
  double drop_cost = 0.0;          // $ overflow charge
};

struct SubproblemInstance {
  std::vector<SubOrder> orders;  // carried orders first, then valid scenario orders
  Fleet fleet;
  CostParams params;
  int epoch = 0;

  int horizon() const { return params.horizon_T; }
  int vehicle_copies() const { return fleet.size * params.horizon_T; }
  RoutingContext routing_context() const;
  OrderTable order_table() const;
};

// y0[m] == 1 marks pending[m] as served in the current cycle. `scenario` may be null
// for a horizon without new arrivals.
SubproblemInstance build_subproblem(std::span<const std::uint8_t> y0, std::span<const Order> pending,
                                    const Scenario* scenario, const Fleet& fleet,
                                    const CostParams& params, int epoch);

enum class RecourseMethod { kGreedy, kAugmented, kExact };
const char* to_string(RecourseMethod m);

struct SearchBudget {
  int max_iterations = 60;   // guided-local-search penalty rounds
  double wall_time_s = 0.0;  // optional cap; 0 disables it (keeps runs deterministic)
};

struct GuidedSearchParams {
  double lambda_factor = 0.1;  // penalty weight relative to the mean arc cost
};

struct RecourseStats {
  int iterations = 0;
  double wall_time_ms = 0.0;
};

struct RecourseResult {
  FulfillmentPlan plan;
  double cost = 0.0;
  RecourseMethod method = RecourseMethod::kGreedy;
  RecourseStats stats;
};

// Routes indexed by vehicle copy (cycle-major); orders not routed go to overflow.
struct CopyAssignment {
  std::vector<std::vector<int>> routes;
};

double assignment_cost(const SubproblemInstance& inst, const RoutingContext& ctx, const CopyAssignment& a);
FulfillmentPlan assignment_plan(const SubproblemInstance& inst, const CopyAssignment& a);
RecourseResult finish_result(const SubproblemInstance& inst, const CopyAssignment& a, RecourseMethod method);

RecourseResult solve_greedy(const SubproblemInstance& inst);
RecourseResult solve_augmented(const SubproblemInstance& inst, const SearchBudget& budget,
                               const GuidedSearchParams& gls = {});
// Exact optimum; throws SizeLimitError above `cap` orders.
RecourseResult solve_exact(const SubproblemInstance& inst, int cap = 10);

// Cheaper of a cycle-ascending and a cycle-descending cheapest-arc construction.
CopyAssignment greedy_assignment(const SubproblemInstance& inst, const RoutingContext& ctx);
CopyAssignment guided_search(const SubproblemInstance& inst, const RoutingContext& ctx, CopyAssignment start,
                             const SearchBudget& budget, const GuidedSearchParams& gls, int* iterations);

// Re-sequences a route's stops for minimum beta-distance + gamma-energy. Returns the
// input unchanged (and sets *no_feasible_order) when no ordering fits the battery.
Route refine_route_energy(const Route& route, const OrderTable& orders, const Fleet& fleet,
                          const CostParams& params, bool* no_feasible_order = nullptr);

struct RecourseOptions {
  RecourseMethod method = RecourseMethod::kAugmented;
  SearchBudget budget;
  GuidedSearchParams gls;
  int exact_cap = 10;
  int threads = 1;
};

struct RecourseAverage {
  double mean_cost = 0.0;
  std::vector<double> per_scenario;
};

RecourseAverage recourse_average(std::span<const std::uint8_t> y0, std::span<const Order> pending,
                                 std::span<const Scenario> scenarios, const Fleet& fleet,
                                 const CostParams& params, int epoch, const RecourseOptions& options);

// Largest per-scenario count of servable orders for the given deferral vector.
int max_servable_orders(std::span<const std::uint8_t> y0, std::span<const Scenario> scenarios);

}  // namespace dof
