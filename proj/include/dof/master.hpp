// Master problem of the branch-and-cut: slim optimality cuts over the fulfillment
// decisions, the relaxed first-stage routing LP, and exact first-stage routing.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dof/model.hpp"
#include "dof/simplex.hpp"
#include "dof/subproblem.hpp"

namespace dof {

// theta >= (recourse - bound) * (sum_{S} y - sum_{not S} y) - (recourse - bound) * (|S| - 1) + bound,
// where S is the set of orders selected at the generating iterate.
struct SlimCut {
  std::vector<std::uint8_t> selection;
  double recourse = 0.0;     // recourse estimate at the iterate
  double lower_bound = 0.0;  // global recourse lower bound
  RecourseMethod tier = RecourseMethod::kAugmented;

  double slope() const { return recourse - lower_bound; }
  int selected_count() const;
  double rhs(std::span<const double> y) const;
  double rhs(std::span<const std::uint8_t> y) const;
};

// Throws CutError when recourse < lower_bound.
SlimCut make_slim_cut(std::span<const std::uint8_t> selection, double recourse, double lower_bound,
                      RecourseMethod tier);

struct FirstStagePlan {
  bool feasible = false;
  std::vector<Route> routes;
  ItemizedCost cost;  // delay of selected orders plus routing terms
};

// Exact cheapest cover of the selected orders by at most |K| routes in cycle
// `epoch`. Throws SizeLimitError beyond 15 selected orders.
FirstStagePlan first_stage_routes(std::span<const std::uint8_t> y0, std::span<const Order> pending,
                                  const Fleet& fleet, const CostParams& params, int epoch);

// Current-cycle delay charge, in dollars, for serving `order` at `epoch`.
double first_stage_delay(const Order& order, int epoch, const CostParams& params);

struct MasterFormulation {
  std::vector<Order> pending;
  Fleet fleet;
  CostParams params;
  int epoch = 0;
  double lower_bound = 0.0;
  std::vector<SlimCut> cuts;
};

struct MasterRelaxation {
  bool feasible = false;
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  double theta = 0.0;
  std::vector<double> y;  // per pending order; fixed-to-zero orders report 0
  int iterations = 0;
};

// Fixings: -1 free, 0 or 1 fixed. Orders fixed to zero are dropped from the LP.
MasterRelaxation solve_master_relaxation(const MasterFormulation& f, std::span<const std::int8_t> fixings);

}  // namespace dof
