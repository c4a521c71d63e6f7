#include "dof/master.hpp"

#include <bit>

namespace dof {

int SlimCut::selected_count() const {
  int s = 0;
  for (std::uint8_t v : selection) s += v ? 1 : 0;
  return s;
}

double SlimCut::rhs(std::span<const double> y) const {
  if (y.size() != selection.size()) throw ConfigError("cut evaluated on a vector of the wrong length");
  double signed_sum = 0;
  for (std::size_t m = 0; m < y.size(); ++m) signed_sum += selection[m] ? y[m] : -y[m];
  return slope() * signed_sum - slope() * (selected_count() - 1) + lower_bound;
}

double SlimCut::rhs(std::span<const std::uint8_t> y) const {
  std::vector<double> d(y.begin(), y.end());
  return rhs(std::span<const double>(d));
}

SlimCut make_slim_cut(std::span<const std::uint8_t> selection, double recourse, double lower_bound,
                      RecourseMethod tier) {
  if (recourse < lower_bound)
    throw CutError("recourse estimate " + std::to_string(recourse) + " is below the lower bound " +
                   std::to_string(lower_bound));
  SlimCut cut;
  cut.selection.reserve(selection.size());
  for (std::uint8_t v : selection) {
    if (v > 1) throw CutError("cut iterate must be binary");
    cut.selection.push_back(v);
  }
  cut.recourse = recourse;
  cut.lower_bound = lower_bound;
  cut.tier = tier;
  return cut;
}

double first_stage_delay(const Order& order, int epoch, const CostParams& params) {
  return params.alpha * delay_penalty(order, epoch, params);
}

FirstStagePlan first_stage_routes(std::span<const std::uint8_t> y0, std::span<const Order> pending,
                                  const Fleet& fleet, const CostParams& params, int epoch) {
  if (y0.size() != pending.size()) throw ConfigError("y0 length must equal the number of pending orders");
  std::vector<const Order*> chosen;
  for (std::size_t m = 0; m < pending.size(); ++m)
    if (y0[m]) chosen.push_back(&pending[m]);
  if (chosen.size() > 15)
    throw SizeLimitError("first-stage routing supports at most 15 selected orders, got " +
                         std::to_string(chosen.size()));
  FirstStagePlan plan;
  if (chosen.empty()) {
    plan.feasible = true;
    return plan;
  }
  std::vector<Stop> stops;
  for (const Order* o : chosen) stops.push_back(Stop{o->destination, o->weight});
  const RoutingContext ctx(stops, fleet, params);
  const SubsetRoutes table(ctx, fleet.size);
  const Mask full = static_cast<Mask>((std::uint64_t{1} << chosen.size()) - 1);
  if (table.partition_cost(full) == kInf) return plan;
  plan.feasible = true;
  OrderTable table_orders;
  for (const Order* o : chosen) {
    table_orders.add(*o);
    plan.cost.delay += first_stage_delay(*o, epoch, params);
  }
  int vehicle = 1;
  for (Mask r : table.partition(full)) {
    std::vector<const Order*> seq;
    for (int i : table.route_sequence(r)) seq.push_back(chosen[i]);
    Route route = make_route(vehicle++, epoch, seq, fleet);
    plan.cost += route_cost(route, table_orders, fleet, params);
    plan.routes.push_back(std::move(route));
  }
  return plan;
}

MasterRelaxation solve_master_relaxation(const MasterFormulation& f, std::span<const std::int8_t> fixings) {
  const int total = static_cast<int>(f.pending.size());
  if (static_cast<int>(fixings.size()) != total) throw ConfigError("fixings length must equal the number of pending orders");
  const VehicleSpec& spec = f.fleet.spec;
  const double Q = spec.load_capacity;
  const double E = spec.battery_capacity;
  const int K = f.fleet.size;
  const CostParams& p = f.params;

  std::vector<int> active;
  for (int m = 0; m < total; ++m)
    if (fixings[m] != 0) active.push_back(m);
  const int n = static_cast<int>(active.size());
  // Node 0 is the departure depot, 1..n the active orders, n+1 the return depot.
  const int depot_out = 0, depot_in = n + 1;
  auto point = [&](int node) {
    return node == depot_out || node == depot_in ? f.fleet.depot : f.pending[active[node - 1]].destination;
  };
  auto weight = [&](int node) { return node == depot_out || node == depot_in ? 0.0 : f.pending[active[node - 1]].weight; };

  LinearProgram lp;
  std::vector<int> y(n);
  for (int a = 0; a < n; ++a) {
    const Order& o = f.pending[active[a]];
    const double lo = fixings[active[a]] == 1 ? 1.0 : 0.0;
    y[a] = lp.add_variable(first_stage_delay(o, f.epoch, p), lo, 1.0);
  }
  const int theta = lp.add_variable(1.0, f.lower_bound, kInf);

  std::vector<int> r(K);
  // x[k][i][j] for i in {0..n}, j in {1..n+1}, i != j, not (0 -> n+1).
  std::vector<std::vector<int>> x(K, std::vector<int>(static_cast<std::size_t>((n + 2) * (n + 2)), -1));
  std::vector<std::vector<int>> u(K, std::vector<int>(n + 2)), v(K, std::vector<int>(n + 2));
  auto arc = [&](int i, int j) { return i * (n + 2) + j; };
  for (int k = 0; k < K; ++k) {
    r[k] = lp.add_variable(p.kappa, 0.0, 1.0);
    for (int i = 0; i <= n; ++i)
      for (int j = 1; j <= n + 1; ++j) {
        if (i == j || (i == depot_out && j == depot_in)) continue;
        x[k][arc(i, j)] = lp.add_variable(p.beta * distance(point(i), point(j)), 0.0, 1.0);
      }
    for (int i = 0; i <= n + 1; ++i) {
      u[k][i] = lp.add_variable(0.0, 0.0, i == depot_in ? 0.0 : Q);
      const double v_lo = i == depot_out ? E : 0.0;
      v[k][i] = lp.add_variable(i == depot_in ? -p.gamma : 0.0, v_lo, E);
    }
  }

  for (int k = 0; k < K; ++k) {
    // Dispatch indicator equals departures from the depot.
    std::vector<std::pair<int, double>> row{{r[k], 1.0}};
    for (int j = 1; j <= n; ++j) row.push_back({x[k][arc(depot_out, j)], -1.0});
    lp.add_row(row, RowSense::kEqual, 0.0);
    if (k > 0) lp.add_row({{r[k], 1.0}, {r[k - 1], -1.0}}, RowSense::kLessEqual, 0.0);
  }
  for (int a = 0; a < n; ++a) {
    const int node = a + 1;
    std::vector<std::pair<int, double>> serve{{y[a], 1.0}};
    for (int k = 0; k < K; ++k) {
      std::vector<std::pair<int, double>> flow;
      for (int j = 1; j <= n + 1; ++j)
        if (x[k][arc(node, j)] >= 0) {
          serve.push_back({x[k][arc(node, j)], -1.0});
          flow.push_back({x[k][arc(node, j)], -1.0});
        }
      for (int i = 0; i <= n; ++i)
        if (x[k][arc(i, node)] >= 0) flow.push_back({x[k][arc(i, node)], 1.0});
      lp.add_row(flow, RowSense::kEqual, 0.0);
    }
    lp.add_row(serve, RowSense::kEqual, 0.0);
  }
  // Load and charge propagation along used arcs. The charge row's big-M covers the
  // largest possible leg draw so an unused arc never binds.
  const double e0 = spec.energy_base / spec.cruise_speed;
  const double e1 = spec.energy_per_kg / spec.cruise_speed;
  for (int k = 0; k < K; ++k)
    for (int i = 0; i <= n; ++i)
      for (int j = 1; j <= n + 1; ++j) {
        const int xa = x[k][arc(i, j)];
        if (xa < 0) continue;
        const double d = distance(point(i), point(j));
        lp.add_row({{u[k][j], 1.0}, {u[k][i], -1.0}, {xa, Q}}, RowSense::kLessEqual, Q - weight(j));
        const double big = E + (e0 + e1 * Q) * d;
        lp.add_row({{v[k][j], 1.0}, {v[k][i], -1.0}, {u[k][i], e1 * d}, {xa, big}}, RowSense::kLessEqual,
                   big - e0 * d);
      }
  for (const SlimCut& cut : f.cuts) {
    if (static_cast<int>(cut.selection.size()) != total) throw ConfigError("cut length does not match the order count");
    const double c = cut.slope();
    std::vector<std::pair<int, double>> row{{theta, 1.0}};
    for (int a = 0; a < n; ++a) row.push_back({y[a], cut.selection[active[a]] ? -c : c});
    lp.add_row(row, RowSense::kGreaterEqual, cut.lower_bound - c * (cut.selected_count() - 1));
  }

  const LpSolution sol = solve_lp(lp);
  MasterRelaxation out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  if (sol.status != LpStatus::kOptimal) return out;
  out.feasible = true;
  out.objective = sol.objective + p.gamma * E * K;
  out.theta = sol.x[theta];
  out.y.assign(total, 0.0);
  for (int a = 0; a < n; ++a) out.y[active[a]] = sol.x[y[a]];
  return out;
}

}  // namespace dof
