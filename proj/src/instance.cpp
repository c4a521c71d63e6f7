#include "dof/instance.hpp"

#include <random>

namespace dof {

Instance generate_instance(const InstanceShape& shape, std::uint64_t seed, const Fleet& fleet,
                           const CostParams& params) {
  if (shape.pending_orders < 0 || shape.scenario_orders < 1 || shape.scenarios < 1 || shape.max_age < 0)
    throw ConfigError("instance shape needs pending >= 0, scenario_orders >= 1, scenarios >= 1, max_age >= 0");
  fleet.validate();
  params.validate();
  Instance inst;
  inst.fleet = fleet;
  inst.params = params;
  inst.seed = seed;
  inst.epoch = 0;
  inst.profile = benchmark_profile(shape.scenario_orders);
  std::mt19937_64 rng(split_seed(seed, 0xF1257000ULL));
  const Rect& map = inst.profile.map_bounds;
  std::uniform_real_distribution<double> ux(map.min_x, map.max_x), uy(map.min_y, map.max_y);
  std::uniform_real_distribution<double> uw(inst.profile.weight_min, inst.profile.weight_max);
  std::uniform_int_distribution<int> age(0, shape.max_age);
  for (int m = 0; m < shape.pending_orders; ++m) {
    Order o;
    o.id = m;
    o.destination = {ux(rng), uy(rng)};
    o.weight = uw(rng);
    o.arrival_cycle = inst.epoch - age(rng);
    inst.pending.push_back(o);
  }
  inst.scenarios = sample_scenarios(inst.profile, shape.scenarios, params.horizon_T, split_seed(seed, 0x5CE7A000ULL),
                                    inst.epoch);
  return inst;
}

}  // namespace dof
