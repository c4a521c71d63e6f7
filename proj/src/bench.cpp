#include "dof/bench.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "dof/error.hpp"

namespace dof {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

BenchSummary summarize(const std::vector<double>& values) {
  BenchSummary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0;
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

BenchCell run_cell(BenchMethod method, const Instance& in, const BenchConfig& config, int threads) {
  BenchCell cell;
  const auto start = Clock::now();
  try {
    if (method == BenchMethod::kOracle) {
      const OracleResult r =
          solve_ef_exact(in.pending, in.scenarios, in.fleet, in.params, in.epoch, config.oracle_caps, threads);
      cell.objective = r.optimal_objective;
      cell.proven = true;
    } else {
      LShapedConfig cfg = config.solver;
      switch (method) {
        case BenchMethod::kGreedy: cfg.mode = SolveMode::kGreedyOnly; break;
        case BenchMethod::kTwoTier: cfg.mode = SolveMode::kTwoTier; break;
        case BenchMethod::kAugmented: cfg.mode = SolveMode::kAugmentedOnly; break;
        default: cfg.mode = SolveMode::kExact; break;
      }
      const LShapedSolution r = run_lshaped(in.pending, in.scenarios, in.fleet, in.params, in.epoch, cfg);
      cell.objective = r.objective;
      cell.nodes = r.stats.nodes_created;
      cell.proven = r.stats.proven;
    }
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  cell.wall_time_ms = elapsed_ms(start);
  return cell;
}

}  // namespace

const char* to_string(BenchMethod m) {
  switch (m) {
    case BenchMethod::kGreedy: return "greedy";
    case BenchMethod::kTwoTier: return "two_tier";
    case BenchMethod::kAugmented: return "augmented";
    case BenchMethod::kExact: return "exact";
    default: return "oracle";
  }
}

void BenchConfig::validate() const {
  if (instances < 1) throw ConfigError("bench needs at least one instance");
  if (pending_min < 0 || pending_max < pending_min) throw ConfigError("bench pending range is empty");
  if (scenario_orders_min < 0 || scenario_orders_max < scenario_orders_min)
    throw ConfigError("bench scenario order range is empty");
  if (scenarios < 1) throw ConfigError("bench needs at least one scenario");
  if (max_age < 0) throw ConfigError("max_age must be non-negative");
  solver.validate();
  fleet.validate();
  params.validate();
}

InstanceShape BenchConfig::shape(int i) const {
  const int pending_levels = pending_max - pending_min + 1;
  const int scenario_levels = scenario_orders_max - scenario_orders_min + 1;
  InstanceShape s;
  s.pending_orders = pending_min + i % pending_levels;
  s.scenario_orders = scenario_orders_min + (i / pending_levels) % scenario_levels;
  s.scenarios = scenarios;
  s.max_age = max_age;
  return s;
}

BenchTable run_bench(const BenchConfig& config, int threads) {
  config.validate();
  BenchTable table;
  std::vector<double> gaps[kBenchMethodCount], times[kBenchMethodCount];
  for (int i = 0; i < config.instances; ++i) {
    BenchRow row;
    row.index = i;
    row.seed = config.seed + static_cast<std::uint64_t>(i);
    row.shape = config.shape(i);
    const Instance in = generate_instance(row.shape, row.seed, config.fleet, config.params);
    for (int m = 0; m < kBenchMethodCount; ++m) row.cells[m] = run_cell(static_cast<BenchMethod>(m), in, config, threads);
    const BenchCell& exact = row.cells[static_cast<int>(BenchMethod::kExact)];
    for (int m = 0; m < kBenchMethodCount; ++m) {
      BenchCell& c = row.cells[m];
      if (c.ok && exact.ok) {
        c.gap_pct = exact.objective == 0.0 ? 0.0 : (c.objective - exact.objective) / exact.objective * 100.0;
        gaps[m].push_back(c.gap_pct);
      } else {
        c.gap_pct = std::numeric_limits<double>::quiet_NaN();
      }
      if (c.ok) times[m].push_back(c.wall_time_ms);
    }
    table.rows.push_back(std::move(row));
  }
  for (int m = 0; m < kBenchMethodCount; ++m) {
    table.gap[m] = summarize(gaps[m]);
    table.time_ms[m] = summarize(times[m]);
  }
  return table;
}

}  // namespace dof
