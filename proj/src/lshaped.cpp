#include "dof/lshaped.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

namespace dof {

const char* to_string(SolveMode m) {
  switch (m) {
    case SolveMode::kTwoTier: return "two_tier";
    case SolveMode::kGreedyOnly: return "greedy_only";
    case SolveMode::kAugmentedOnly: return "augmented_only";
    case SolveMode::kExact: return "exact";
  }
  return "unknown";
}

SolveMode parse_solve_mode(const std::string& s) {
  if (s == "two_tier" || s == "two-tier") return SolveMode::kTwoTier;
  if (s == "greedy_only" || s == "greedy-only" || s == "greedy") return SolveMode::kGreedyOnly;
  if (s == "augmented_only" || s == "augmented-only" || s == "augmented") return SolveMode::kAugmentedOnly;
  if (s == "exact") return SolveMode::kExact;
  throw ConfigError("unknown solve mode '" + s + "' (expected two_tier, greedy_only, augmented_only or exact)");
}

void LShapedConfig::validate() const {
  if (!(nu >= 0.0 && nu <= 1.0)) throw ConfigError("nu must lie in [0, 1]");
  if (max_nodes < 1) throw ConfigError("max_nodes must be at least 1");
  if (time_budget_s < 0) throw ConfigError("time budget must be non-negative");
  if (master_cap < 0) throw ConfigError("master_cap must be non-negative");
  if (recourse.threads < 1) throw ConfigError("threads must be at least 1");
}

RecourseEvaluator::RecourseEvaluator(std::span<const Order> pending, std::span<const Scenario> scenarios,
                                     const Fleet& fleet, const CostParams& params, int epoch,
                                     const RecourseOptions& options)
    : pending_(pending.begin(), pending.end()), scenarios_(scenarios), fleet_(fleet), params_(params),
      epoch_(epoch), options_(options) {
  if (scenarios.empty()) throw ConfigError("at least one scenario is required");
}

bool RecourseEvaluator::exact_fits(std::span<const std::uint8_t> y0) const {
  return max_servable_orders(y0, scenarios_) <= std::min(options_.exact_cap, +SubsetRoutes::kMaxStops);
}

double RecourseEvaluator::evaluate(std::span<const std::uint8_t> y0, RecourseMethod tier) {
  auto& memo = memo_[static_cast<int>(tier)];
  std::vector<std::uint8_t> key(y0.begin(), y0.end());
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  RecourseOptions opt = options_;
  opt.method = tier;
  const double value = recourse_average(y0, pending_, scenarios_, fleet_, params_, epoch_, opt).mean_cost;
  ++solves_[static_cast<int>(tier)];
  memo.emplace(std::move(key), value);
  return value;
}

LowerBound lower_bound(RecourseEvaluator& evaluator, std::size_t pending_count, bool require_exact) {
  const std::vector<std::uint8_t> all(pending_count, 1);
  LowerBound lb;
  lb.method = require_exact || evaluator.exact_fits(all) ? RecourseMethod::kExact : RecourseMethod::kAugmented;
  lb.value = evaluator.evaluate(all, lb.method);
  return lb;
}

namespace {

double overflow_charge(const Order& o, int epoch, const CostParams& p) { return p.alpha * overflow_penalty(o, epoch, p); }

// Cheapest-insertion construction for instances beyond the exact enumeration cap.
MyopicSolution myopic_greedy(std::span<const Order> pending, const Fleet& fleet, const CostParams& params, int epoch) {
  const int n = static_cast<int>(pending.size());
  std::vector<Stop> stops;
  for (const Order& o : pending) stops.push_back(Stop{o.destination, o.weight});
  const RoutingContext ctx(stops, fleet, params);
  std::vector<std::vector<int>> routes(fleet.size);
  std::vector<double> cost(fleet.size, 0.0);
  std::vector<char> used(n, 0);
  for (;;) {
    double best = -1e-12;
    int bi = -1, bk = -1;
    std::size_t bp = 0;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double gain = first_stage_delay(pending[i], epoch, params) - overflow_charge(pending[i], epoch, params);
      for (int k = 0; k < fleet.size; ++k) {
        for (std::size_t p = 0; p <= routes[k].size(); ++p) {
          std::vector<int> trial = routes[k];
          trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(p), i);
          const double c = ctx.route_cost(trial);
          if (c == kInf) continue;
          const double delta = c - cost[k] + gain;
          if (delta < best) {
            best = delta;
            bi = i;
            bk = k;
            bp = p;
          }
        }
        if (routes[k].empty()) break;  // empty vehicles are interchangeable
      }
    }
    if (bi < 0) break;
    routes[bk].insert(routes[bk].begin() + static_cast<std::ptrdiff_t>(bp), bi);
    cost[bk] = ctx.route_cost(routes[bk]);
    used[bi] = 1;
  }
  MyopicSolution out;
  out.exact = false;
  out.y0.assign(n, 0);
  for (int i = 0; i < n; ++i) out.y0[i] = used[i];
  OrderTable table(pending);
  int vehicle = 1;
  for (auto& r : routes) {
    if (r.empty()) continue;
    if (r.size() <= 12)
      if (auto s = best_sequence(ctx, r)) r = s->order;
    std::vector<const Order*> seq;
    for (int i : r) seq.push_back(&pending[i]);
    Route route = make_route(vehicle++, epoch, seq, fleet);
    out.first_stage += route_cost(route, table, fleet, params);
    out.routes.push_back(std::move(route));
  }
  for (int i = 0; i < n; ++i) {
    if (used[i]) out.first_stage.delay += first_stage_delay(pending[i], epoch, params);
    else out.overflow_cost += overflow_charge(pending[i], epoch, params);
  }
  out.objective = out.first_stage.total() + out.overflow_cost;
  return out;
}

}  // namespace

MyopicSolution solve_myopic(std::span<const Order> pending, const Fleet& fleet, const CostParams& params, int epoch,
                            int cap) {
  const int n = static_cast<int>(pending.size());
  if (n > std::min(cap, 15)) return myopic_greedy(pending, fleet, params, epoch);
  MyopicSolution out;
  out.y0.assign(n, 0);
  if (n == 0) return out;
  std::vector<Stop> stops;
  for (const Order& o : pending) stops.push_back(Stop{o.destination, o.weight});
  const RoutingContext ctx(stops, fleet, params);
  const SubsetRoutes table(ctx, fleet.size);
  const Mask full = static_cast<Mask>((std::uint64_t{1} << n) - 1);
  std::vector<double> serve(std::size_t{1} << n, 0.0), drop(std::size_t{1} << n, 0.0);
  for (Mask s = 1; s <= full; ++s) {
    const int low = std::countr_zero(s);
    serve[s] = serve[s & (s - 1)] + first_stage_delay(pending[low], epoch, params);
    drop[s] = drop[s & (s - 1)] + overflow_charge(pending[low], epoch, params);
  }
  double best = kInf;
  Mask arg = 0;
  for (Mask s = 0; s <= full; ++s) {
    const double route = table.partition_cost(s);
    if (route == kInf) continue;
    const double c = route + serve[s] + drop[full ^ s];
    if (c < best - 1e-12) {
      best = c;
      arg = s;
    }
  }
  for (int i = 0; i < n; ++i) out.y0[i] = arg >> i & 1;
  const FirstStagePlan plan = first_stage_routes(out.y0, pending, fleet, params, epoch);
  out.routes = plan.routes;
  out.first_stage = plan.cost;
  for (int i = 0; i < n; ++i)
    if (!out.y0[i]) out.overflow_cost += overflow_charge(pending[i], epoch, params);
  out.objective = out.first_stage.total() + out.overflow_cost;
  return out;
}

RecourseMethod step_six_tier(SolveMode mode) {
  switch (mode) {
    case SolveMode::kExact: return RecourseMethod::kExact;
    case SolveMode::kGreedyOnly: return RecourseMethod::kGreedy;
    default: return RecourseMethod::kAugmented;
  }
}

WarmStart warm_start(RecourseEvaluator& evaluator, std::span<const Order> pending, const Fleet& fleet,
                     const CostParams& params, int epoch, double bound, SolveMode mode) {
  WarmStart ws;
  ws.mode = mode;
  const std::size_t n = pending.size();
  const std::vector<std::uint8_t> all(n, 1);
  if (mode == SolveMode::kTwoTier && n > 0 && !first_stage_routes(all, pending, fleet, params, epoch).feasible)
    ws.mode = SolveMode::kGreedyOnly;
  const RecourseMethod tier = step_six_tier(ws.mode);
  const MyopicSolution myopic = solve_myopic(pending, fleet, params, epoch);
  const std::vector<std::uint8_t> none(n, 0);
  for (const auto* y : {&none, &myopic.y0}) {
    if (y == &myopic.y0 && myopic.y0 == none) break;
    const double value = std::max(evaluator.evaluate(*y, tier), bound);
    ws.cuts.push_back(make_slim_cut(*y, value, bound, tier));
  }
  ws.incumbent = myopic.y0;
  ws.incumbent_plan = first_stage_routes(myopic.y0, pending, fleet, params, epoch);
  ws.incumbent_recourse = ws.cuts.back().recourse;
  ws.incumbent_objective = ws.incumbent_plan.cost.total() + ws.incumbent_recourse;
  return ws;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* cut_action(RecourseMethod tier) {
  switch (tier) {
    case RecourseMethod::kGreedy: return "step6:greedy_cut";
    case RecourseMethod::kAugmented: return "step6:augmented_cut";
    default: return "step6:exact_cut";
  }
}

struct Node {
  std::vector<std::int8_t> fixings;
  double bound = 0.0;
  int id = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

constexpr double kThetaTol = 1e-6;
constexpr double kIntegralTol = 1e-6;

}  // namespace

LShapedSolution run_lshaped(std::span<const Order> pending, std::span<const Scenario> scenarios,
                            const Fleet& fleet, const CostParams& params, int epoch, const LShapedConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  config.validate();
  fleet.validate();
  params.validate();
  const int M = static_cast<int>(pending.size());
  if (M > config.master_cap)
    throw SizeLimitError("branch-and-cut supports at most " + std::to_string(config.master_cap) +
                         " pending orders, got " + std::to_string(M));

  RecourseEvaluator evaluator(pending, scenarios, fleet, params, epoch, config.recourse);
  const bool exact_mode = config.mode == SolveMode::kExact;
  const LowerBound lb = lower_bound(evaluator, pending.size(), exact_mode);
  const double L = lb.value;

  WarmStart ws = warm_start(evaluator, pending, fleet, params, epoch, L, config.mode);
  const SolveMode mode = ws.mode;
  const RecourseMethod main_tier = step_six_tier(mode);

  LShapedSolution best;
  best.mode = mode;
  best.lower_bound = L;
  best.y0 = ws.incumbent;
  best.routes = ws.incumbent_plan.routes;
  best.first_stage = ws.incumbent_plan.cost;
  best.recourse = ws.incumbent_recourse;
  best.objective = ws.incumbent_objective;
  LShapedStats& stats = best.stats;

  MasterFormulation master;
  master.pending.assign(pending.begin(), pending.end());
  master.fleet = fleet;
  master.params = params;
  master.epoch = epoch;
  master.lower_bound = L;
  master.cuts = ws.cuts;
  auto count_cut = [&](RecourseMethod tier) {
    if (tier == RecourseMethod::kGreedy) ++stats.greedy_cuts;
    else if (tier == RecourseMethod::kAugmented) ++stats.augmented_cuts;
    else ++stats.exact_cuts;
  };
  for (const SlimCut& c : ws.cuts) count_cut(c.tier);

  std::map<std::vector<std::uint8_t>, FirstStagePlan> plans;
  auto first_stage = [&](const std::vector<std::uint8_t>& y) -> const FirstStagePlan& {
    auto it = plans.find(y);
    if (it == plans.end()) it = plans.emplace(y, first_stage_routes(y, pending, fleet, params, epoch)).first;
    return it->second;
  };
  auto has_cut = [&](const std::vector<std::uint8_t>& y, RecourseMethod tier) {
    for (const SlimCut& c : master.cuts)
      if (c.tier == tier && c.selection == y) return true;
    return false;
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
  int next_id = 0;
  queue.push(Node{std::vector<std::int8_t>(M, -1), -kInf, next_id++});
  stats.nodes_created = 1;
  bool exhausted = false;

  auto out_of_budget = [&]() {
    if (stats.nodes_processed >= config.max_nodes) return true;
    if (config.time_budget_s > 0 &&
        std::chrono::duration<double>(Clock::now() - start).count() >= config.time_budget_s)
      return true;
    return false;
  };
  auto branch = [&](const Node& node, int m, double bound) {
    for (std::int8_t value : {std::int8_t{0}, std::int8_t{1}}) {
      Node child{node.fixings, bound, next_id++};
      child.fixings[m] = value;
      queue.push(std::move(child));
      ++stats.nodes_created;
    }
  };
  auto trace = [&](const Node& node, double theta, double estimate, const char* action) {
    if (config.trace)
      config.trace(TraceEvent{stats.lp_solves, node.id, theta, estimate, best.objective, action});
  };
  auto lowest_free = [&](const Node& node) {
    for (int m = 0; m < M; ++m)
      if (node.fixings[m] < 0) return m;
    return -1;
  };

  while (!queue.empty()) {
    if (out_of_budget()) {
      exhausted = true;
      break;
    }
    Node node = queue.top();
    queue.pop();
    if (node.bound >= best.objective - kThetaTol) continue;
    ++stats.nodes_processed;

    for (;;) {
      const MasterRelaxation lp = solve_master_relaxation(master, node.fixings);
      ++stats.lp_solves;
      if (!lp.feasible) {
        trace(node, kNaN, kNaN, "step2:infeasible");
        break;
      }
      if (lp.objective >= best.objective - kThetaTol) {
        trace(node, lp.theta, kNaN, "step3:fathom_bound");
        break;
      }

      int frac = -1;
      double frac_dist = 0.5;
      for (int m = 0; m < M; ++m) {
        const double f = lp.y[m] - std::floor(lp.y[m]);
        if (f < kIntegralTol || f > 1 - kIntegralTol) continue;
        const double d = std::abs(f - 0.5);
        if (d < frac_dist - 1e-12) {
          frac_dist = d;
          frac = m;
        }
      }
      if (frac >= 0) {
        branch(node, frac, lp.objective);
        trace(node, lp.theta, kNaN, "step3:branch_fractional");
        break;
      }

      std::vector<std::uint8_t> y(M);
      for (int m = 0; m < M; ++m) y[m] = lp.y[m] > 0.5 ? 1 : 0;
      const FirstStagePlan& plan = first_stage(y);
      if (!plan.feasible) {
        const int m = lowest_free(node);
        if (m >= 0) branch(node, m, lp.objective);
        trace(node, lp.theta, kNaN, "step4:first_stage_infeasible");
        break;
      }

      if (mode == SolveMode::kTwoTier && !has_cut(y, RecourseMethod::kGreedy)) {
        const double greedy = std::max(evaluator.evaluate(y, RecourseMethod::kGreedy), L);
        if (lp.theta < config.nu * greedy && greedy > lp.theta + kThetaTol) {
          master.cuts.push_back(make_slim_cut(y, greedy, L, RecourseMethod::kGreedy));
          count_cut(RecourseMethod::kGreedy);
          trace(node, lp.theta, greedy, "step5:greedy_cut");
          continue;
        }
      }

      const double recourse = std::max(evaluator.evaluate(y, main_tier), L);
      const double z = plan.cost.total() + recourse;
      if (z < best.objective - 1e-12) {
        best.objective = z;
        best.y0 = y;
        best.routes = plan.routes;
        best.first_stage = plan.cost;
        best.recourse = recourse;
        trace(node, lp.theta, recourse, "step6:incumbent");
      }
      if (lp.theta >= recourse - kThetaTol || has_cut(y, main_tier)) {
        // The relaxed routing block can sit below the integral routing cost, so in
        // exact mode other selections in this node may still beat y.
        if (exact_mode && lp.objective < z - kThetaTol) {
          const int m = lowest_free(node);
          if (m >= 0) branch(node, m, lp.objective);
        }
        trace(node, lp.theta, recourse, "step6:fathom");
        break;
      }
      master.cuts.push_back(make_slim_cut(y, recourse, L, main_tier));
      count_cut(main_tier);
      trace(node, lp.theta, recourse, cut_action(main_tier));
    }
  }

  stats.budget_exhausted = exhausted;
  stats.proven = exact_mode && !exhausted;
  stats.recourse_evaluations = evaluator.solves(RecourseMethod::kGreedy) + evaluator.solves(RecourseMethod::kAugmented) +
                               evaluator.solves(RecourseMethod::kExact);
  stats.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return best;
}

}  // namespace dof
