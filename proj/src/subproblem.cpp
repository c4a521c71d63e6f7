#include "dof/subproblem.hpp"

#include <algorithm>
#include <chrono>

#include "dof/parallel.hpp"

namespace dof {

const char* to_string(RecourseMethod m) {
  switch (m) {
    case RecourseMethod::kGreedy: return "greedy";
    case RecourseMethod::kAugmented: return "augmented";
    case RecourseMethod::kExact: return "exact";
  }
  return "unknown";
}

SubproblemInstance build_subproblem(std::span<const std::uint8_t> y0, std::span<const Order> pending,
                                    const Scenario* scenario, const Fleet& fleet,
                                    const CostParams& params, int epoch) {
  if (y0.size() != pending.size()) throw ConfigError("y0 length must equal the number of pending orders");
  SubproblemInstance inst;
  inst.fleet = fleet;
  inst.params = params;
  inst.epoch = epoch;
  const int T = params.horizon_T;

  auto priced = [&](const Order& o, bool carried, int earliest, int first, int last) {
    SubOrder s;
    s.order = o;
    s.carried = carried;
    s.earliest = earliest;
    s.window_first = first;
    s.window_last = last;
    s.serve_cost.assign(T, kInf);
    for (int t = earliest; t <= T; ++t) s.serve_cost[t - 1] = params.alpha * delay_penalty(o, epoch + t, params);
    s.drop_cost = params.alpha * overflow_penalty(o, epoch, params);
    return s;
  };

  for (std::size_t m = 0; m < pending.size(); ++m) {
    if (y0[m]) continue;
    const Order& o = pending[m];
    if (!o.valid) continue;
    const int age = epoch - o.arrival_cycle;
    const int last = age >= T ? 1 : T - age;
    inst.orders.push_back(priced(o, true, 1, 1, last));
  }
  if (scenario) {
    for (const Order& o : scenario->orders) {
      if (!o.valid) continue;
      const int a = std::clamp(o.arrival_cycle - epoch, 1, T);
      inst.orders.push_back(priced(o, false, a, a, T));
    }
  }
  std::stable_sort(inst.orders.begin(), inst.orders.end(),
                   [](const SubOrder& a, const SubOrder& b) { return a.order.id < b.order.id; });
  return inst;
}

RoutingContext SubproblemInstance::routing_context() const {
  std::vector<Stop> stops;
  stops.reserve(orders.size());
  for (const SubOrder& s : orders) stops.push_back(Stop{s.order.destination, s.order.weight});
  return RoutingContext(std::move(stops), fleet, params);
}

OrderTable SubproblemInstance::order_table() const {
  OrderTable table;
  for (const SubOrder& s : orders) table.add(s.order);
  return table;
}

double assignment_cost(const SubproblemInstance& inst, const RoutingContext& ctx, const CopyAssignment& a) {
  const int K = inst.fleet.size;
  std::vector<char> served(inst.orders.size(), 0);
  double cost = 0;
  for (std::size_t v = 0; v < a.routes.size(); ++v) {
    const int t = static_cast<int>(v) / K + 1;
    cost += ctx.route_cost(a.routes[v]);
    for (int i : a.routes[v]) {
      served[i] = 1;
      cost += inst.orders[i].serve_cost[t - 1];
    }
  }
  for (std::size_t i = 0; i < served.size(); ++i)
    if (!served[i]) cost += inst.orders[i].drop_cost;
  return cost;
}

FulfillmentPlan assignment_plan(const SubproblemInstance& inst, const CopyAssignment& a) {
  const int K = inst.fleet.size;
  const int T = inst.horizon();
  FulfillmentPlan plan;
  std::vector<int> served_at(inst.orders.size(), 0);
  for (std::size_t v = 0; v < a.routes.size(); ++v)
    for (int i : a.routes[v]) served_at[i] = static_cast<int>(v) / K + 1;
  for (int t = 1; t <= T; ++t) {
    CyclePlan cp;
    cp.cycle = inst.epoch + t;
    int index = 1;
    for (int k = 0; k < K; ++k) {
      const std::size_t v = static_cast<std::size_t>((t - 1) * K + k);
      if (v >= a.routes.size() || a.routes[v].empty()) continue;
      std::vector<const Order*> stops;
      for (int i : a.routes[v]) stops.push_back(&inst.orders[i].order);
      cp.routes.push_back(make_route(index++, cp.cycle, stops, inst.fleet));
    }
    for (std::size_t i = 0; i < inst.orders.size(); ++i) {
      const SubOrder& s = inst.orders[i];
      if (s.earliest <= t && (served_at[i] == 0 || served_at[i] > t)) cp.deferred.push_back(s.order.id);
    }
    plan.cycles.push_back(std::move(cp));
  }
  for (std::size_t i = 0; i < inst.orders.size(); ++i)
    if (served_at[i] == 0) plan.overflow.push_back(inst.orders[i].order.id);
  return plan;
}

RecourseResult finish_result(const SubproblemInstance& inst, const CopyAssignment& a, RecourseMethod method) {
  RecourseResult r;
  r.method = method;
  r.plan = assignment_plan(inst, a);
  r.cost = plan_cost(r.plan, inst.order_table(), inst.fleet, inst.params, inst.epoch).total();
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

RecourseResult solve_greedy(const SubproblemInstance& inst) {
  const auto start = Clock::now();
  const RoutingContext ctx = inst.routing_context();
  RecourseResult r = finish_result(inst, greedy_assignment(inst, ctx), RecourseMethod::kGreedy);
  r.stats.iterations = 1;
  r.stats.wall_time_ms = elapsed_ms(start);
  return r;
}

RecourseResult solve_augmented(const SubproblemInstance& inst, const SearchBudget& budget,
                               const GuidedSearchParams& gls) {
  if (budget.max_iterations < 0 || budget.wall_time_s < 0) throw ConfigError("search budget must be non-negative");
  const auto start = Clock::now();
  const RoutingContext ctx = inst.routing_context();
  int iterations = 0;
  CopyAssignment greedy = greedy_assignment(inst, ctx);
  CopyAssignment best = guided_search(inst, ctx, greedy, budget, gls, &iterations);
  RecourseResult r = finish_result(inst, best, RecourseMethod::kAugmented);
  r.stats.iterations = iterations;
  r.stats.wall_time_ms = elapsed_ms(start);
  return r;
}

Route refine_route_energy(const Route& route, const OrderTable& orders, const Fleet& fleet,
                          const CostParams& params, bool* no_feasible_order) {
  if (no_feasible_order) *no_feasible_order = false;
  if (route.stops.size() <= 1) return route;
  std::vector<Stop> stops;
  for (OrderId id : route.stops) {
    const Order& o = orders.at(id);
    stops.push_back(Stop{o.destination, o.weight});
  }
  const RoutingContext ctx(std::move(stops), fleet, params);
  std::vector<int> identity(route.stops.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<int>(i);
  const RoutingContext::Eval original = ctx.evaluate(identity);

  std::vector<int> order;
  if (identity.size() <= 12) {
    auto best = best_sequence(ctx, identity);
    if (!best) {
      if (no_feasible_order) *no_feasible_order = true;
      return route;
    }
    order = best->order;
  } else {
    // Pairwise-swap descent.
    order = identity;
    double current = original.feasible() ? original.travel : kInf;
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t a = 0; a + 1 < order.size(); ++a) {
        for (std::size_t b = a + 1; b < order.size(); ++b) {
          std::swap(order[a], order[b]);
          const RoutingContext::Eval e = ctx.evaluate(order);
          if (e.feasible() && e.travel < current - 1e-12) {
            current = e.travel;
            improved = true;
          } else {
            std::swap(order[a], order[b]);
          }
        }
      }
    }
    if (current == kInf) {
      if (no_feasible_order) *no_feasible_order = true;
      return route;
    }
  }
  const RoutingContext::Eval refined = ctx.evaluate(order);
  if (original.feasible() && original.travel <= refined.travel) return route;
  std::vector<OrderId> ids;
  for (int i : order) ids.push_back(route.stops[i]);
  return make_route(route.vehicle_index, route.cycle, ids, orders, fleet);
}

int max_servable_orders(std::span<const std::uint8_t> y0, std::span<const Scenario> scenarios) {
  int carried = 0;
  for (std::uint8_t b : y0) carried += b ? 0 : 1;
  int best = carried;
  for (const Scenario& s : scenarios) {
    int valid = 0;
    for (const Order& o : s.orders) valid += o.valid ? 1 : 0;
    best = std::max(best, carried + valid);
  }
  return best;
}

RecourseAverage recourse_average(std::span<const std::uint8_t> y0, std::span<const Order> pending,
                                 std::span<const Scenario> scenarios, const Fleet& fleet,
                                 const CostParams& params, int epoch, const RecourseOptions& options) {
  if (scenarios.empty()) throw ConfigError("recourse_average needs at least one scenario");
  RecourseAverage out;
  out.per_scenario.assign(scenarios.size(), 0.0);
  parallel_for(scenarios.size(), options.threads, [&](std::size_t i) {
    const SubproblemInstance inst = build_subproblem(y0, pending, &scenarios[i], fleet, params, epoch);
    switch (options.method) {
      case RecourseMethod::kGreedy: out.per_scenario[i] = solve_greedy(inst).cost; break;
      case RecourseMethod::kAugmented:
        out.per_scenario[i] = solve_augmented(inst, options.budget, options.gls).cost;
        break;
      case RecourseMethod::kExact: out.per_scenario[i] = solve_exact(inst, options.exact_cap).cost; break;
    }
  });
  double sum = 0;
  for (double c : out.per_scenario) sum += c;
  out.mean_cost = sum / static_cast<double>(scenarios.size());
  return out;
}

}  // namespace dof
