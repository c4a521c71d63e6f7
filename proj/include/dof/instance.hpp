// Self-contained solve instances: pending orders, a scenario set and parameters.
#pragma once

#include <cstdint>
#include <vector>

#include "dof/model.hpp"
#include "dof/scenario.hpp"

namespace dof {

struct Instance {
  std::vector<Order> pending;
  std::vector<Scenario> scenarios;
  DemandProfile profile;
  Fleet fleet;
  CostParams params;
  int epoch = 0;
  std::uint64_t seed = 0;
};

struct InstanceShape {
  int pending_orders = 5;
  int scenario_orders = 5;
  int scenarios = 10;
  int max_age = 1;  // pending orders arrived 0..max_age cycles before the epoch
};

// Benchmark instance: pending destinations uniform on the map, weights uniform on
// the profile range, scenarios from the extended-square benchmark profile.
Instance generate_instance(const InstanceShape& shape, std::uint64_t seed, const Fleet& fleet = {},
                           const CostParams& params = {});

}  // namespace dof
