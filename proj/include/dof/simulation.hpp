// Rolling-horizon replay of a realized order stream under a fulfillment policy,
// paired policy comparisons and uncertainty sweeps.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dof/lshaped.hpp"
#include "dof/model.hpp"
#include "dof/scenario.hpp"

namespace dof {

enum class PolicyKind { kTwoStage, kSingleStage };
const char* to_string(PolicyKind p);
PolicyKind parse_policy(const std::string& s);  // throws ConfigError

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kTwoStage;
  LShapedConfig solver;  // two-stage only
  int scenario_count = 10;
  int myopic_cap = 15;
  void validate() const;
};

struct SimulationConfig {
  DemandProfile profile = lunch_peak_profile();
  int cycles = 12;
  Fleet fleet;
  CostParams params;
  void validate() const;
};

struct CycleLedger {
  int cycle = 0;
  std::vector<OrderId> carried_in;  // pending from earlier cycles
  std::vector<OrderId> arrived;
  std::vector<OrderId> fulfilled;
  std::vector<OrderId> deferred;
  std::vector<Route> routes;
  ItemizedCost cost;
  int dispatches = 0;
  std::string solver;  // solve mode used this cycle, or "myopic"
  bool fallback = false;
  std::string note;
};

struct SimulationRun {
  PolicyKind policy = PolicyKind::kTwoStage;
  std::uint64_t seed = 0;
  int replication = 0;
  std::vector<Order> realized;  // every order of the stream, by arrival
  std::vector<CycleLedger> cycles;
  std::vector<OrderId> unfulfilled;  // still pending after the last cycle
  ItemizedCost terminal;             // overflow charge of `unfulfilled`, as delay
  ItemizedCost totals;
  int dispatches = 0;
  int fallbacks = 0;
};

// Replays cycles 0..cycles-1 of the stream drawn from `seed`. The two-stage policy
// samples its scenarios from an independent sub-seed, so both policies see the same
// stream for the same seed.
SimulationRun simulate(const PolicyConfig& policy, const SimulationConfig& config, std::uint64_t seed,
                       int replication = 0);

// Ledger identities of a run: charge and load telescoping per route, cost additivity
// and order conservation per cycle. Returns one message per violation.
std::vector<std::string> audit_run(const SimulationRun& run, const SimulationConfig& config);

// Percent change from policy a to policy b; negative means b is cheaper.
struct CostChange {
  double total = 0.0;
  double delay = 0.0;
  double distance = 0.0;
  double energy = 0.0;
  double dispatch = 0.0;
};

enum class SavingMechanism { kNone, kTripReduction, kTripSaving };
const char* to_string(SavingMechanism m);

// Fewer dispatches is a trip reduction; equal dispatches with lower distance plus
// energy is a trip saving.
SavingMechanism classify_saving(const ItemizedCost& a, int dispatches_a, const ItemizedCost& b, int dispatches_b);
CostChange percent_change(const ItemizedCost& a, const ItemizedCost& b);

struct PairComparison {
  std::uint64_t seed = 0;
  ItemizedCost a;
  ItemizedCost b;
  int dispatches_a = 0;
  int dispatches_b = 0;
  CostChange change;
  SavingMechanism mechanism = SavingMechanism::kNone;
  int trip_reduction_events = 0;  // consecutive cycle pairs
  int trip_saving_events = 0;
};

struct ComparisonReport {
  std::vector<PairComparison> pairs;
  CostChange mean;
  CostChange sd;
  int trip_reduction_events = 0;
  int trip_saving_events = 0;
};

// Runs are paired by position and must share seeds and cycle counts; throws
// PairingError otherwise.
ComparisonReport compare_policies(std::span<const SimulationRun> a, std::span<const SimulationRun> b);

// Paired single-stage (a) vs two-stage (b) runs over replication seeds derived from
// `seed`; replications run on up to `threads` workers.
ComparisonReport run_paired(const PolicyConfig& two_stage, const SimulationConfig& config, int replications,
                            std::uint64_t seed, int threads, std::vector<SimulationRun>* single_runs = nullptr,
                            std::vector<SimulationRun>* two_stage_runs = nullptr);
std::uint64_t replication_seed(std::uint64_t seed, int replication);

enum class SensitivityAxis { kArrivalSd, kLocationSd, kWeightRange };
const char* to_string(SensitivityAxis a);
SensitivityAxis parse_axis(const std::string& s);  // throws ConfigError

// Applies one sweep level to the profile. Weight-range levels are half-widths around
// the base range midpoint, floored at a positive minimum weight.
DemandProfile apply_level(const DemandProfile& base, SensitivityAxis axis, double level);

struct SensitivityLevel {
  double level = 0.0;
  ComparisonReport report;
};

struct SensitivityReport {
  SensitivityAxis axis = SensitivityAxis::kArrivalSd;
  std::vector<SensitivityLevel> levels;
};

SensitivityReport sensitivity_suite(const SimulationConfig& base, SensitivityAxis axis, std::span<const double> levels,
                                    int replications, std::uint64_t seed, const PolicyConfig& two_stage,
                                    int threads);

}  // namespace dof
