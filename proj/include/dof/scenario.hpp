// Demand profiles, Monte Carlo scenario sets and ground-truth order streams.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dof/model.hpp"

namespace dof {

struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 2.0;
  double max_y = 2.0;
  bool contains(Point p) const { return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y; }
};

struct Cluster {
  Point center;
  double spread = 0.0;                // sd of destinations around the center, miles
  std::vector<double> arrival_means;  // expected orders per cycle
  double arrival_sd = 0.0;
};

struct DemandProfile {
  std::vector<Cluster> clusters;
  double weight_min = 5.0;
  double weight_max = 10.0;
  Rect map_bounds;
  // Negative margin below the map's lower bounds. When non-zero, scenario orders are
  // drawn uniformly over the extended square and draws outside the map are invalid.
  double coord_low_extension = 0.0;
  // Fixed scenario cardinality; 0 derives it from the arrival schedule.
  int scenario_orders = 0;

  void validate() const;
  double mean_arrivals(int cycle) const;  // summed over clusters, schedule clamped
  double arrival_variance(int cycle) const;
};

struct Scenario {
  int index = 0;
  std::vector<Order> orders;
  std::uint64_t seed = 0;
};

// Ids of scenario orders live above this base so they never collide with pending ids.
inline constexpr OrderId kScenarioIdBase = OrderId{1} << 40;

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

// Fixed number of candidate orders per scenario for the horizon after `epoch`.
int scenario_cardinality(const DemandProfile& profile, int horizon_T, int epoch);

// `count` scenarios of future arrivals in cycles epoch+1..epoch+T. Deterministic in
// (profile, seed); scenario i draws from its own substream split_seed(seed, i).
std::vector<Scenario> sample_scenarios(const DemandProfile& profile, int count, int horizon_T,
                                       std::uint64_t seed, int epoch = 0);

// Realized orders per cycle 0..cycles-1, ids numbered from `first_id`.
std::vector<std::vector<Order>> ground_truth_stream(const DemandProfile& profile, int cycles,
                                                   std::uint64_t seed, OrderId first_id = 0);

// Gamma draw with the given mean and sd; sd == 0 returns the mean.
double sample_gamma(std::mt19937_64& rng, double mean, double sd);

// Normal draw truncated to [lo, hi] by rejection, clamped after 1000 attempts.
double sample_truncated_normal(std::mt19937_64& rng, double mean, double sd, double lo, double hi);

// Two-cluster lunch-peak profile used by the operational experiments.
DemandProfile lunch_peak_profile();

// Benchmark profile: uniform extended coordinates on [-1, 2]^2, weights U[5, 10],
// `orders` candidates per scenario spread uniformly over the horizon.
DemandProfile benchmark_profile(int orders);

}  // namespace dof
