// Single-vehicle routing primitives: sequence evaluation, exact energy-aware
// sequencing, and per-subset route/partition tables used by the exact solvers.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dof/model.hpp"

namespace dof {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Mask = std::uint32_t;

struct Stop {
  Point at;
  double weight = 0.0;
};

// Precomputed distances and per-leg cost slopes for a fixed set of stops.
// Node 0 is the depot; stop i is node i + 1.
class RoutingContext {
 public:
  RoutingContext(std::vector<Stop> stops, const Fleet& fleet, const CostParams& params);

  int size() const { return static_cast<int>(stops_.size()); }
  const Stop& stop(int i) const { return stops_[i]; }
  const Fleet& fleet() const { return fleet_; }
  const CostParams& params() const { return params_; }

  double dist(int node_a, int node_b) const { return dist_[node_a * nodes_ + node_b]; }
  // beta*d + gamma*energy for a leg between nodes carrying `load`.
  double leg_cost(int node_a, int node_b, double load) const;
  double leg_kwh(int node_a, int node_b, double load) const;

  struct Eval {
    double travel = 0.0;  // beta*miles + gamma*kWh
    double miles = 0.0;
    double kwh = 0.0;
    double payload = 0.0;
    bool capacity_ok = true;
    bool battery_ok = true;
    bool feasible() const { return capacity_ok && battery_ok; }
  };

  // Visits stop indices `seq` in order from and back to the depot.
  Eval evaluate(std::span<const int> seq) const;

  // travel + kappa for a non-empty feasible sequence, 0 for empty, kInf if infeasible.
  double route_cost(std::span<const int> seq) const;

 private:
  std::vector<Stop> stops_;
  Fleet fleet_;
  CostParams params_;
  int nodes_ = 0;
  std::vector<double> dist_;
};

struct Sequence {
  std::vector<int> order;  // stop indices
  double travel = 0.0;     // beta*miles + gamma*kWh (no dispatch charge)
};

// Minimum-travel battery- and capacity-feasible ordering of `subset` (stop indices),
// by a Pareto-label dynamic program over visited subsets. Exact; intended for up to
// ~12 stops. nullopt when no ordering is feasible.
std::optional<Sequence> best_sequence(const RoutingContext& ctx, std::span<const int> subset);

// Per-subset cheapest single route and cheapest cover by at most `max_routes`
// routes, for up to kMaxStops stops.
class SubsetRoutes {
 public:
  static constexpr int kMaxStops = 16;

  SubsetRoutes(const RoutingContext& ctx, int max_routes);

  int size() const { return n_; }
  // travel + kappa of the best single route over `mask`; kInf if infeasible.
  double route_cost(Mask mask) const { return route_[mask]; }
  std::vector<int> route_sequence(Mask mask) const;

  // Cheapest way to serve exactly `mask` with at most max_routes routes.
  double partition_cost(Mask mask) const { return part_[mask]; }
  std::vector<Mask> partition(Mask mask) const;

 private:
  void build_routes();
  void build_partitions();

  const RoutingContext& ctx_;
  int n_;
  int max_routes_;
  std::vector<double> weight_;   // per mask
  std::vector<double> route_;    // per mask
  std::vector<int> first_;       // first stop of best single route per mask
  std::vector<double> tail_;     // tail DP: [mask * n + i]
  std::vector<std::int8_t> tail_next_;
  std::vector<std::vector<int>> fallback_seq_;  // battery-constrained orderings
  std::vector<Mask> fallback_mask_;
  std::vector<double> part_;
  std::vector<Mask> part_choice_;  // route chosen for mask at the top level
  std::vector<std::vector<double>> level_;
  std::vector<std::vector<Mask>> level_choice_;
};

}  // namespace dof
