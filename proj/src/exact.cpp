// Exact recourse: per-subset optimal routes, per-cycle covers by at most |K| routes,
// then a dynamic program assigning order subsets to cycles (the rest overflow).
#include <bit>

#include "dof/subproblem.hpp"

#include <chrono>

namespace dof {

RecourseResult solve_exact(const SubproblemInstance& inst, int cap) {
  const auto start = std::chrono::steady_clock::now();
  const int n = static_cast<int>(inst.orders.size());
  if (n > cap || n > SubsetRoutes::kMaxStops)
    throw SizeLimitError("exact recourse supports at most " + std::to_string(std::min(cap, +SubsetRoutes::kMaxStops)) +
                         " orders, got " + std::to_string(n));
  const int K = inst.fleet.size;
  const int T = inst.horizon();
  const RoutingContext ctx = inst.routing_context();
  const SubsetRoutes table(ctx, K);
  const std::size_t masks = std::size_t{1} << n;
  const Mask full = static_cast<Mask>(masks - 1);

  std::vector<double> best(masks, kInf), next(masks);
  std::vector<std::vector<Mask>> choice(T, std::vector<Mask>(masks, 0));
  std::vector<double> serve(masks);
  best[0] = 0.0;
  for (int t = 1; t <= T; ++t) {
    Mask avail = 0;
    for (int i = 0; i < n; ++i)
      if (inst.orders[i].earliest <= t) avail |= Mask{1} << i;
    serve[0] = 0.0;
    for (Mask s = 1; s < masks; ++s) {
      const int low = std::countr_zero(s);
      serve[s] = serve[s & (s - 1)] + inst.orders[low].serve_cost[t - 1];
    }
    auto& pick = choice[t - 1];
    for (Mask u = 0; u < masks; ++u) {
      double b = best[u];
      Mask arg = 0;
      const Mask open = u & avail;
      for (Mask s = open; s; s = (s - 1) & open) {
        const double prev = best[u ^ s];
        if (prev == kInf) continue;
        const double route = table.partition_cost(s);
        if (route == kInf) continue;
        const double c = prev + route + serve[s];
        if (c < b - 1e-12) {
          b = c;
          arg = s;
        }
      }
      next[u] = b;
      pick[u] = arg;
    }
    best.swap(next);
  }

  double best_total = kInf;
  Mask best_served = 0;
  std::vector<double> drop(masks, 0.0);
  for (Mask s = 1; s < masks; ++s) drop[s] = drop[s & (s - 1)] + inst.orders[std::countr_zero(s)].drop_cost;
  for (Mask u = 0; u < masks; ++u) {
    if (best[u] == kInf) continue;
    const double c = best[u] + drop[full ^ u];
    if (c < best_total - 1e-12) {
      best_total = c;
      best_served = u;
    }
  }

  CopyAssignment a;
  a.routes.assign(static_cast<std::size_t>(K * T), {});
  Mask u = best_served;
  for (int t = T; t >= 1; --t) {
    const Mask s = choice[t - 1][u];
    int k = 0;
    for (Mask r : table.partition(s)) a.routes[static_cast<std::size_t>((t - 1) * K + k++)] = table.route_sequence(r);
    u ^= s;
  }

  RecourseResult r = finish_result(inst, a, RecourseMethod::kExact);
  r.stats.iterations = 1;
  r.stats.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace dof
