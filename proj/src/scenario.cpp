#include "dof/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace dof {

void DemandProfile::validate() const {
  for (const Cluster& c : clusters) {
    if (c.spread < 0) throw ConfigError("cluster spread must be non-negative");
    if (c.arrival_sd < 0) throw ConfigError("arrival_sd must be non-negative");
    for (double m : c.arrival_means)
      if (m < 0) throw ConfigError("arrival means must be non-negative");
  }
  if (!(weight_min > 0) || weight_min > weight_max) throw ConfigError("weight range must satisfy 0 < min <= max");
  if (map_bounds.min_x >= map_bounds.max_x || map_bounds.min_y >= map_bounds.max_y)
    throw ConfigError("map bounds are empty");
  if (coord_low_extension > 0) throw ConfigError("coord_low_extension must be <= 0");
  if (scenario_orders < 0) throw ConfigError("scenario_orders must be non-negative");
}

namespace {

double clamped_mean(const Cluster& c, int cycle) {
  if (c.arrival_means.empty() || cycle < 0) return 0.0;
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(cycle), c.arrival_means.size() - 1);
  return c.arrival_means[i];
}

}  // namespace

double DemandProfile::mean_arrivals(int cycle) const {
  double total = 0;
  for (const Cluster& c : clusters) total += clamped_mean(c, cycle);
  return total;
}

double DemandProfile::arrival_variance(int cycle) const {
  double total = 0;
  for (const Cluster& c : clusters)
    if (clamped_mean(c, cycle) > 0) total += c.arrival_sd * c.arrival_sd;
  return total;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double sample_gamma(std::mt19937_64& rng, double mean, double sd) {
  if (mean <= 0) return 0.0;
  if (sd <= 1e-12) return mean;
  const double shape = (mean / sd) * (mean / sd);
  const double scale = sd * sd / mean;
  return std::gamma_distribution<double>(shape, scale)(rng);
}

double sample_truncated_normal(std::mt19937_64& rng, double mean, double sd, double lo, double hi) {
  if (sd <= 0) return std::clamp(mean, lo, hi);
  std::normal_distribution<double> normal(mean, sd);
  double x = mean;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    x = normal(rng);
    if (x >= lo && x <= hi) return x;
  }
  return std::clamp(x, lo, hi);
}

int scenario_cardinality(const DemandProfile& profile, int horizon_T, int epoch) {
  if (profile.scenario_orders > 0) return profile.scenario_orders;
  double mean = 0, var = 0;
  for (int t = 1; t <= horizon_T; ++t) {
    mean += profile.mean_arrivals(epoch + t);
    var += profile.arrival_variance(epoch + t);
  }
  return static_cast<int>(std::ceil(mean - 1e-9) + std::ceil(3.0 * std::sqrt(var) - 1e-9));
}

namespace {

Order cluster_order(std::mt19937_64& rng, const DemandProfile& p, const Cluster& c, OrderId id, int cycle) {
  Order o;
  o.id = id;
  o.arrival_cycle = cycle;
  o.destination.x = sample_truncated_normal(rng, c.center.x, c.spread, p.map_bounds.min_x, p.map_bounds.max_x);
  o.destination.y = sample_truncated_normal(rng, c.center.y, c.spread, p.map_bounds.min_y, p.map_bounds.max_y);
  o.weight = std::uniform_real_distribution<double>(p.weight_min, p.weight_max)(rng);
  return o;
}

int draw_count(std::mt19937_64& rng, const Cluster& c, int cycle) {
  const double g = sample_gamma(rng, clamped_mean(c, cycle), c.arrival_sd);
  return std::max(0, static_cast<int>(std::lround(g)));
}

Scenario draw_scenario(const DemandProfile& p, int index, int horizon_T, std::uint64_t seed, int epoch,
                       int cardinality) {
  Scenario sc;
  sc.index = index;
  sc.seed = split_seed(seed, static_cast<std::uint64_t>(index));
  std::mt19937_64 rng(sc.seed);
  const OrderId base = kScenarioIdBase + (static_cast<OrderId>(index) << 20);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (p.coord_low_extension < 0) {
    // Extended-square sampling: a fixed number of candidates, some of which land
    // outside the map and are absorbed as invalid.
    std::vector<double> cum;
    double acc = 0;
    for (int t = 1; t <= horizon_T; ++t) {
      acc += p.clusters.empty() ? 1.0 : p.mean_arrivals(epoch + t);
      cum.push_back(acc);
    }
    std::uniform_real_distribution<double> ux(p.map_bounds.min_x + p.coord_low_extension, p.map_bounds.max_x);
    std::uniform_real_distribution<double> uy(p.map_bounds.min_y + p.coord_low_extension, p.map_bounds.max_y);
    std::uniform_real_distribution<double> uw(p.weight_min, p.weight_max);
    for (int j = 0; j < cardinality; ++j) {
      Order o;
      o.id = base + j;
      o.destination = {ux(rng), uy(rng)};
      o.weight = uw(rng);
      int t = horizon_T;
      if (acc > 0) {
        const double u = unit(rng) * acc;
        t = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin()) + 1;
        t = std::min(t, horizon_T);
      }
      o.arrival_cycle = epoch + t;
      o.valid = o.destination.x >= p.map_bounds.min_x && o.destination.y >= p.map_bounds.min_y;
      sc.orders.push_back(o);
    }
    return sc;
  }

  // Cluster sampling: gamma counts per cycle, padded with invalid slots up to the
  // fixed cardinality (excess draws beyond it are discarded).
  for (int t = 1; t <= horizon_T; ++t) {
    for (const Cluster& c : p.clusters) {
      const int n = draw_count(rng, c, epoch + t);
      for (int j = 0; j < n; ++j) {
        Order o = cluster_order(rng, p, c, base + static_cast<OrderId>(sc.orders.size()), epoch + t);
        if (static_cast<int>(sc.orders.size()) < cardinality) sc.orders.push_back(o);
      }
    }
  }
  while (static_cast<int>(sc.orders.size()) < cardinality) {
    Order o;
    o.id = base + static_cast<OrderId>(sc.orders.size());
    o.valid = false;
    o.weight = p.weight_min;
    o.destination = {p.map_bounds.min_x - 1.0, p.map_bounds.min_y - 1.0};
    o.arrival_cycle = epoch + horizon_T;
    sc.orders.push_back(o);
  }
  return sc;
}

}  // namespace

std::vector<Scenario> sample_scenarios(const DemandProfile& profile, int count, int horizon_T,
                                       std::uint64_t seed, int epoch) {
  profile.validate();
  if (count < 1) throw ConfigError("scenario count must be at least 1");
  if (horizon_T < 1) throw ConfigError("horizon must be at least 1");
  if (profile.clusters.empty() && profile.scenario_orders == 0)
    throw ConfigError("demand profile is empty");
  const int cardinality = scenario_cardinality(profile, horizon_T, epoch);
  std::vector<Scenario> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(draw_scenario(profile, i, horizon_T, seed, epoch, cardinality));
  return out;
}

std::vector<std::vector<Order>> ground_truth_stream(const DemandProfile& profile, int cycles,
                                                   std::uint64_t seed, OrderId first_id) {
  profile.validate();
  if (cycles < 1) throw ConfigError("cycles must be at least 1");
  std::vector<std::vector<Order>> stream(cycles);
  OrderId next = first_id;
  for (int t = 0; t < cycles; ++t) {
    std::mt19937_64 rng(split_seed(seed, 0x5EED0000ULL + static_cast<std::uint64_t>(t)));
    for (const Cluster& c : profile.clusters) {
      const int n = draw_count(rng, c, t);
      for (int j = 0; j < n; ++j) stream[t].push_back(cluster_order(rng, profile, c, next++, t));
    }
  }
  return stream;
}

DemandProfile lunch_peak_profile() {
  DemandProfile p;
  Cluster a;
  a.center = {1.5, 1.5};
  a.spread = 0.1;
  a.arrival_means = {1, 2, 3, 3, 4, 3, 3, 4, 3, 3, 2, 1};
  a.arrival_sd = 0.1;
  Cluster b;
  b.center = {0.2, 0.2};
  b.spread = 0.1;
  b.arrival_means = {1, 1, 1, 2, 2, 1, 1, 2, 2, 1, 1, 1};
  b.arrival_sd = 0.1;
  p.clusters = {a, b};
  p.weight_min = 5.0;
  p.weight_max = 6.0;
  return p;
}

DemandProfile benchmark_profile(int orders) {
  DemandProfile p;
  p.weight_min = 5.0;
  p.weight_max = 10.0;
  p.coord_low_extension = -1.0;
  p.scenario_orders = orders;
  return p;
}

}  // namespace dof
