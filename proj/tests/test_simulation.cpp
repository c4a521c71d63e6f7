#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "dof/error.hpp"
#include "dof/simulation.hpp"

using namespace dof;

namespace {

PolicyConfig single_stage() {
  PolicyConfig p;
  p.kind = PolicyKind::kSingleStage;
  return p;
}

PolicyConfig two_stage(int scenarios = 4) {
  PolicyConfig p;
  p.scenario_count = scenarios;
  return p;
}

SimulationConfig short_config(int cycles) {
  SimulationConfig c;
  c.cycles = cycles;
  return c;
}

ItemizedCost items(double delay, double distance, double energy, double dispatch) {
  return ItemizedCost{delay, distance, energy, dispatch};
}

SimulationRun fake_run(std::uint64_t seed, const ItemizedCost& totals, int dispatches, int cycles = 1) {
  SimulationRun r;
  r.seed = seed;
  r.cycles.resize(static_cast<std::size_t>(cycles));
  r.totals = totals;
  r.dispatches = dispatches;
  return r;
}

}  // namespace

TEST_CASE("policy and axis names round-trip") {
  CHECK(parse_policy("two_stage") == PolicyKind::kTwoStage);
  CHECK(parse_policy("single-stage") == PolicyKind::kSingleStage);
  CHECK(parse_policy("myopic") == PolicyKind::kSingleStage);
  CHECK_THROWS_AS(parse_policy("oracle"), ConfigError);
  for (auto a : {SensitivityAxis::kArrivalSd, SensitivityAxis::kLocationSd, SensitivityAxis::kWeightRange})
    CHECK(parse_axis(to_string(a)) == a);
  CHECK_THROWS_AS(parse_axis("speed"), ConfigError);
}

TEST_CASE("empty stream gives an all-zero ledger") {
  SimulationConfig cfg = short_config(3);
  for (Cluster& c : cfg.profile.clusters) {
    std::fill(c.arrival_means.begin(), c.arrival_means.end(), 0.0);
    c.arrival_sd = 0.0;
  }
  for (const PolicyConfig& pol : {single_stage(), two_stage()}) {
    const SimulationRun run = simulate(pol, cfg, 5);
    REQUIRE(run.cycles.size() == 3);
    CHECK(run.totals.total() == 0.0);
    CHECK(run.dispatches == 0);
    CHECK(run.unfulfilled.empty());
    for (const CycleLedger& c : run.cycles) {
      CHECK(c.arrived.empty());
      CHECK(c.routes.empty());
    }
    CHECK(audit_run(run, cfg).empty());
  }
}

TEST_CASE("ledger identities hold for the single-stage policy over 100 seeds") {
  const SimulationConfig cfg = short_config(6);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SimulationRun run = simulate(single_stage(), cfg, 7000 + seed);
    const auto issues = audit_run(run, cfg);
    INFO("seed " << seed << ": " << (issues.empty() ? "" : issues.front()));
    CHECK(issues.empty());
  }
}

TEST_CASE("ledger identities hold for the two-stage policy") {
  const SimulationConfig cfg = short_config(4);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SimulationRun run = simulate(two_stage(), cfg, 8100 + seed);
    const auto issues = audit_run(run, cfg);
    INFO("seed " << seed << ": " << (issues.empty() ? "" : issues.front()));
    CHECK(issues.empty());
    CHECK(run.cycles.back().solver == "myopic");
  }
}

TEST_CASE("audit catches a tampered ledger") {
  const SimulationConfig cfg = short_config(4);
  SimulationRun run = simulate(single_stage(), cfg, 42);
  REQUIRE(audit_run(run, cfg).empty());
  SimulationRun cost = run;
  cost.totals.energy += 0.01;
  CHECK_FALSE(audit_run(cost, cfg).empty());
  SimulationRun lost = run;
  auto it = std::find_if(lost.cycles.begin(), lost.cycles.end(), [](const CycleLedger& c) { return !c.fulfilled.empty(); });
  REQUIRE(it != lost.cycles.end());
  it->fulfilled.pop_back();
  CHECK_FALSE(audit_run(lost, cfg).empty());
}

TEST_CASE("both policies replay the same stream") {
  const SimulationConfig cfg = short_config(4);
  const SimulationRun a = simulate(single_stage(), cfg, 99);
  const SimulationRun b = simulate(two_stage(), cfg, 99);
  REQUIRE(a.realized.size() == b.realized.size());
  for (std::size_t i = 0; i < a.realized.size(); ++i) {
    CHECK(a.realized[i].id == b.realized[i].id);
    CHECK(a.realized[i].weight == b.realized[i].weight);
    CHECK(a.realized[i].destination.x == b.realized[i].destination.x);
    CHECK(a.realized[i].arrival_cycle == b.realized[i].arrival_cycle);
  }
  for (std::size_t t = 0; t < a.cycles.size(); ++t) CHECK(a.cycles[t].arrived == b.cycles[t].arrived);
}

TEST_CASE("simulation is deterministic") {
  const SimulationConfig cfg = short_config(4);
  const SimulationRun a = simulate(two_stage(), cfg, 123);
  const SimulationRun b = simulate(two_stage(), cfg, 123);
  CHECK(a.totals.total() == b.totals.total());
  CHECK(a.dispatches == b.dispatches);
  for (std::size_t t = 0; t < a.cycles.size(); ++t) CHECK(a.cycles[t].fulfilled == b.cycles[t].fulfilled);
}

TEST_CASE("two-cycle worked pair with one fewer dispatch") {
  const ItemizedCost single = items(0.40, 2.15, 0.64, 4.00);
  const ItemizedCost staged = items(0.40, 1.59, 0.64, 3.00);
  CHECK(single.total() == doctest::Approx(7.19).epsilon(1e-9));
  const CostChange c = percent_change(single, staged);
  CHECK(c.total == doctest::Approx(-21.6).epsilon(0.01));
  CHECK(c.dispatch == doctest::Approx(-25.0));
  CHECK(c.delay == 0.0);
  CHECK(classify_saving(single, 4, staged, 3) == SavingMechanism::kTripReduction);
}

TEST_CASE("worked pair with equal dispatches and shorter routes") {
  const ItemizedCost single = items(0.45, 2.08, 0.81, 3.00);
  const ItemizedCost staged = items(0.45, 1.49, 0.59, 3.00);
  CHECK(single.total() == doctest::Approx(6.34));
  CHECK(staged.total() == doctest::Approx(5.53));
  const CostChange c = percent_change(single, staged);
  CHECK(c.total == doctest::Approx(-12.776).epsilon(1e-3));
  CHECK(c.dispatch == 0.0);
  CHECK(classify_saving(single, 3, staged, 3) == SavingMechanism::kTripSaving);
}

TEST_CASE("no saving when b is not cheaper") {
  const ItemizedCost a = items(1, 1, 1, 1);
  CHECK(classify_saving(a, 2, a, 2) == SavingMechanism::kNone);
  CHECK(classify_saving(a, 2, items(1, 1, 1, 2), 1) == SavingMechanism::kNone);
  CHECK(classify_saving(a, 2, items(0.5, 1, 1, 1), 2) == SavingMechanism::kNone);
}

TEST_CASE("percent change edge cases") {
  const CostChange z = percent_change(ItemizedCost{}, ItemizedCost{});
  CHECK(z.total == 0.0);
  const CostChange up = percent_change(ItemizedCost{}, items(1, 0, 0, 0));
  CHECK(up.delay == 100.0);
}

TEST_CASE("identical runs compare at zero change") {
  const std::vector<SimulationRun> a{fake_run(1, items(1, 2, 3, 4), 4), fake_run(2, items(2, 2, 2, 2), 2)};
  const ComparisonReport r = compare_policies(a, a);
  REQUIRE(r.pairs.size() == 2);
  CHECK(r.mean.total == 0.0);
  CHECK(r.sd.total == 0.0);
  CHECK(r.pairs[0].mechanism == SavingMechanism::kNone);
}

TEST_CASE("comparison mean and sample deviation") {
  const std::vector<SimulationRun> a{fake_run(1, items(0, 0, 0, 10), 10), fake_run(2, items(0, 0, 0, 10), 10)};
  const std::vector<SimulationRun> b{fake_run(1, items(0, 0, 0, 9), 9), fake_run(2, items(0, 0, 0, 7), 7)};
  const ComparisonReport r = compare_policies(a, b);
  CHECK(r.mean.total == doctest::Approx(-20.0));
  CHECK(r.sd.total == doctest::Approx(std::sqrt(200.0)));
  CHECK(r.pairs[1].mechanism == SavingMechanism::kTripReduction);
}

TEST_CASE("unpaired runs are rejected") {
  const std::vector<SimulationRun> a{fake_run(1, items(1, 1, 1, 1), 1)};
  const std::vector<SimulationRun> other_seed{fake_run(2, items(1, 1, 1, 1), 1)};
  const std::vector<SimulationRun> other_len{fake_run(1, items(1, 1, 1, 1), 1, 3)};
  const std::vector<SimulationRun> none;
  CHECK_THROWS_AS(compare_policies(a, other_seed), PairingError);
  CHECK_THROWS_AS(compare_policies(a, other_len), PairingError);
  CHECK_THROWS_AS(compare_policies(a, none), PairingError);
}

TEST_CASE("sweep levels reshape the profile") {
  const DemandProfile base = lunch_peak_profile();
  const DemandProfile sd = apply_level(base, SensitivityAxis::kArrivalSd, 5.0);
  for (const Cluster& c : sd.clusters) CHECK(c.arrival_sd == 5.0);
  const DemandProfile loc = apply_level(base, SensitivityAxis::kLocationSd, 0.3);
  for (const Cluster& c : loc.clusters) CHECK(c.spread == 0.3);
  const double mid = 0.5 * (base.weight_min + base.weight_max);
  const DemandProfile w = apply_level(base, SensitivityAxis::kWeightRange, 1.5);
  CHECK(w.weight_min == doctest::Approx(mid - 1.5));
  CHECK(w.weight_max == doctest::Approx(mid + 1.5));
  const DemandProfile wide = apply_level(base, SensitivityAxis::kWeightRange, 100.0);
  CHECK(wide.weight_min == doctest::Approx(0.1));
  CHECK_THROWS_AS(apply_level(base, SensitivityAxis::kArrivalSd, -1.0), ConfigError);
}

TEST_CASE("paired runs share seeds and match direct simulation") {
  const SimulationConfig cfg = short_config(3);
  std::vector<SimulationRun> a, b;
  const ComparisonReport r = run_paired(two_stage(), cfg, 2, 17, 2, &a, &b);
  REQUIRE(r.pairs.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(a[i].seed == replication_seed(17, i));
    CHECK(b[i].seed == a[i].seed);
    CHECK(a[i].policy == PolicyKind::kSingleStage);
    CHECK(b[i].policy == PolicyKind::kTwoStage);
    CHECK(b[i].totals.total() == simulate(two_stage(), cfg, a[i].seed, i).totals.total());
  }
  CHECK(replication_seed(17, 0) != replication_seed(17, 1));
}

TEST_CASE("sensitivity suite runs one paired comparison per level") {
  const SimulationConfig cfg = short_config(2);
  const std::vector<double> levels{0.5};
  const SensitivityReport s = sensitivity_suite(cfg, SensitivityAxis::kWeightRange, levels, 1, 3, two_stage(), 1);
  REQUIRE(s.levels.size() == 1);
  CHECK(s.levels[0].level == 0.5);
  CHECK(s.levels[0].report.pairs.size() == 1);
  CHECK_THROWS_AS(sensitivity_suite(cfg, SensitivityAxis::kWeightRange, std::vector<double>{}, 1, 3, two_stage(), 1),
                  ConfigError);
}

TEST_CASE("oversized pending set falls back to the myopic decision") {
  const SimulationConfig cfg = short_config(3);
  PolicyConfig pol = two_stage();
  pol.solver.master_cap = 0;
  const SimulationRun run = simulate(pol, cfg, 11);
  CHECK(run.fallbacks > 0);
  int flagged = 0;
  for (const CycleLedger& c : run.cycles)
    if (c.fallback) {
      ++flagged;
      CHECK(c.solver == "myopic");
      CHECK_FALSE(c.note.empty());
    }
  CHECK(flagged == run.fallbacks);
  CHECK(audit_run(run, cfg).empty());
  const SimulationRun myopic = simulate(single_stage(), cfg, 11);
  CHECK(run.totals.total() == doctest::Approx(myopic.totals.total()).epsilon(1e-12));
}

TEST_CASE("invalid configurations are rejected") {
  PolicyConfig pol = two_stage();
  pol.scenario_count = 0;
  CHECK_THROWS_AS(simulate(pol, short_config(2), 1), ConfigError);
  CHECK_THROWS_AS(simulate(single_stage(), short_config(0), 1), ConfigError);
}
