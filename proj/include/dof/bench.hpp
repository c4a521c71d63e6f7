// Method comparison suite: every solve mode and the exhaustive oracle on a batch of
// generated instances, with objective gaps measured against the exact mode.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dof/instance.hpp"
#include "dof/lshaped.hpp"
#include "dof/oracle.hpp"

namespace dof {

enum class BenchMethod { kGreedy, kTwoTier, kAugmented, kExact, kOracle };
inline constexpr int kBenchMethodCount = 5;
const char* to_string(BenchMethod m);

struct BenchConfig {
  int instances = 10;
  int pending_min = 4;
  int pending_max = 5;
  int scenario_orders_min = 4;
  int scenario_orders_max = 5;
  int scenarios = 5;
  int max_age = 1;
  std::uint64_t seed = 2000;  // instance i is generated from seed + i
  LShapedConfig solver;       // mode is overridden per column
  OracleCaps oracle_caps{6, 12, 10};
  Fleet fleet;
  CostParams params;
  void validate() const;
  // Shape of instance `i`: pending count cycles fastest, then scenario orders.
  InstanceShape shape(int i) const;
};

struct BenchCell {
  bool ok = false;
  std::string error;  // set when the method failed on this instance
  double objective = 0.0;
  double gap_pct = 0.0;  // vs the exact column; NaN when either side failed
  double wall_time_ms = 0.0;
  int nodes = 0;
  bool proven = false;
};

struct BenchRow {
  int index = 0;
  std::uint64_t seed = 0;
  InstanceShape shape;
  BenchCell cells[kBenchMethodCount];
};

struct BenchSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample deviation
  double max = 0.0;
  int count = 0;    // successful cells
};

struct BenchTable {
  std::vector<BenchRow> rows;
  BenchSummary gap[kBenchMethodCount];
  BenchSummary time_ms[kBenchMethodCount];
};

// Instances run sequentially so wall times are not skewed by sharing cores; `threads`
// is passed to the oracle only.
BenchTable run_bench(const BenchConfig& config, int threads = 1);

}  // namespace dof
