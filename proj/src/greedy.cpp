// Cheapest-arc route construction over cycle-bound vehicle copies.
#include <algorithm>

#include "dof/subproblem.hpp"

namespace dof {

namespace {

// Fills cycles in ascending order, or descending when `latest_first`; the descending
// pass only places an order in a cycle that costs at most `slack` more than its
// earliest one, so late copies batch orders that can wait.
CopyAssignment construct(const SubproblemInstance& inst, const RoutingContext& ctx, bool latest_first) {
  constexpr double slack = 0.5;
  const int n = static_cast<int>(inst.orders.size());
  const int K = inst.fleet.size;
  const int T = inst.horizon();
  CopyAssignment out;
  out.routes.assign(static_cast<std::size_t>(K * T), {});
  std::vector<char> assigned(n, 0);
  std::vector<int> seq;
  std::vector<int> trial;

  for (int step = 1; step <= T; ++step) {
    const int t = latest_first ? T + 1 - step : step;
    // Orders whose best route this cycle did not pay for itself.
    std::vector<char> rejected(n, 0);
    for (int k = 0; k < K; ++k) {
      seq.clear();
      double travel = 0;
      for (;;) {
        int best = -1;
        double best_marginal = kInf;
        for (int i = 0; i < n; ++i) {
          const SubOrder& s = inst.orders[i];
          if (assigned[i] || rejected[i] || s.earliest > t) continue;
          if (latest_first && s.serve_cost[t - 1] > s.serve_cost[s.earliest - 1] + slack) continue;
          trial = seq;
          trial.push_back(i);
          const RoutingContext::Eval e = ctx.evaluate(trial);
          if (!e.feasible()) continue;
          const double marginal = e.travel - travel;
          // Extending past the first stop must beat leaving the order for overflow.
          if (!seq.empty() && marginal + s.serve_cost[t - 1] > s.drop_cost) continue;
          if (marginal < best_marginal - 1e-12) {
            best_marginal = marginal;
            best = i;
          }
        }
        if (best < 0) break;
        seq.push_back(best);
        assigned[best] = 1;
        travel += best_marginal;
      }
      if (seq.empty()) break;

      if (seq.size() > 1) {
        if (auto refined = best_sequence(ctx, seq)) seq = refined->order;
      }
      double serve = 0, drop = 0;
      for (int i : seq) {
        serve += inst.orders[i].serve_cost[t - 1];
        drop += inst.orders[i].drop_cost;
      }
      if (ctx.route_cost(seq) + serve >= drop) {
        for (int i : seq) {
          assigned[i] = 0;
          rejected[i] = 1;
        }
        --k;  // the vehicle copy stays free for the remaining orders
        continue;
      }
      out.routes[static_cast<std::size_t>((t - 1) * K + k)] = seq;
    }
  }
  return out;
}

}  // namespace

CopyAssignment greedy_assignment(const SubproblemInstance& inst, const RoutingContext& ctx) {
  CopyAssignment forward = construct(inst, ctx, false);
  CopyAssignment backward = construct(inst, ctx, true);
  return assignment_cost(inst, ctx, backward) < assignment_cost(inst, ctx, forward) ? backward : forward;
}

}  // namespace dof
