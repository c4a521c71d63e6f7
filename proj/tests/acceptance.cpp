// Acceptance suite: one PASS/FAIL line per criterion. Exits 0 once every criterion
// has been evaluated; --strict exits with the number of failing criteria and
// --only N evaluates a single criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dof/bench.hpp"
#include "dof/commands.hpp"
#include "dof/instance.hpp"
#include "dof/io.hpp"
#include "dof/lshaped.hpp"
#include "dof/master.hpp"
#include "dof/oracle.hpp"
#include "dof/simulation.hpp"
#include "dof/subproblem.hpp"
#include "oracle_util.hpp"

using namespace dof;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int id, bool pass, Clock::time_point start, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s  (%.1f s)\n", id, pass ? "PASS" : "FAIL", detail.c_str(), seconds_since(start));
  std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<std::uint8_t> bits(unsigned mask, int n) {
  std::vector<std::uint8_t> y(n);
  for (int i = 0; i < n; ++i) y[i] = mask >> i & 1;
  return y;
}

double mean_recourse(const Instance& in, const std::vector<std::uint8_t>& y, RecourseMethod method) {
  RecourseOptions opt;
  opt.method = method;
  return recourse_average(y, in.pending, in.scenarios, in.fleet, in.params, in.epoch, opt).mean_cost;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Reductions are reported as positive percentages.
double reduction(const ComparisonReport& r) { return -r.mean.total; }

void exactness() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const Instance in = generate_instance({4, 4, 3, 1}, 1000 + s);
    LShapedConfig cfg;
    cfg.mode = SolveMode::kExact;
    const LShapedSolution sol = run_lshaped(in.pending, in.scenarios, in.fleet, in.params, in.epoch, cfg);
    const OracleResult ref = solve_ef_exact(in.pending, in.scenarios, in.fleet, in.params, in.epoch);
    worst = std::max(worst, std::abs(sol.objective - ref.optimal_objective));
  }
  report(1, worst <= 1e-6 && seconds_since(start) < 120, start, fmt("20 instances, max |exact - oracle| = %.2e", worst));
}

void heuristic_quality_and_speed() {
  auto start = Clock::now();
  const BenchTable table = run_bench(BenchConfig{});
  const int tt = static_cast<int>(BenchMethod::kTwoTier);
  const int ex = static_cast<int>(BenchMethod::kExact);
  bool all_ok = true;
  bool always_faster = true;
  std::vector<double> speedups;
  for (const BenchRow& row : table.rows) {
    const BenchCell& a = row.cells[tt];
    const BenchCell& b = row.cells[ex];
    if (!a.ok || !b.ok) {
      all_ok = false;
      continue;
    }
    always_faster = always_faster && a.wall_time_ms < b.wall_time_ms;
    speedups.push_back(b.wall_time_ms / a.wall_time_ms);
  }
  const BenchSummary& gap = table.gap[tt];
  const bool quality = all_ok && gap.count == 10 && gap.mean <= 2.0 && gap.max <= 5.0;
  report(2, quality && seconds_since(start) < 600, start,
         fmt("two-tier gap vs exact: mean %.2f%%, max %.2f%% over %d instances", gap.mean, gap.max, gap.count));
  const double med = speedups.empty() ? 0.0 : median(speedups);
  const double lo = speedups.empty() ? 0.0 : *std::min_element(speedups.begin(), speedups.end());
  report(3, all_ok && always_faster && med >= 5.0, start,
         fmt("exact/two-tier wall time: median %.2fx, min %.2fx, faster on every instance: %s", med, lo,
             always_faster ? "yes" : "no"));
}

void subproblem_gaps() {
  const auto start = Clock::now();
  double greedy_sum = 0, greedy_max = 0, aug_sum = 0;
  for (int s = 0; s < 10; ++s) {
    const Instance in = generate_instance({4, 4, 10, 1}, 4000 + s);
    const std::vector<std::uint8_t> none(in.pending.size(), 0);
    const double exact = mean_recourse(in, none, RecourseMethod::kExact);
    const double greedy = 100.0 * (mean_recourse(in, none, RecourseMethod::kGreedy) - exact) / exact;
    const double aug = 100.0 * (mean_recourse(in, none, RecourseMethod::kAugmented) - exact) / exact;
    greedy_sum += greedy;
    greedy_max = std::max(greedy_max, greedy);
    aug_sum += aug;
  }
  const double greedy_mean = greedy_sum / 10, aug_mean = aug_sum / 10;
  report(4, greedy_mean <= 5.0 && greedy_max <= 10.0 && aug_mean <= 2.0 && seconds_since(start) < 300, start,
         fmt("greedy gap mean %.2f%%, max %.2f%%; augmented gap mean %.2f%%", greedy_mean, greedy_max, aug_mean));
}

void propositions() {
  const auto start = Clock::now();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(0, 20);

  int cut_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    const unsigned eta_mask = static_cast<unsigned>(rng() % (1u << n));
    const double bound = value(rng);
    const double estimate = bound + value(rng);
    const SlimCut cut = make_slim_cut(bits(eta_mask, n), estimate, bound, RecourseMethod::kExact);
    for (unsigned m = 0; m < (1u << n); ++m) {
      const auto y = bits(m, n);
      const double rhs = cut.rhs(std::span<const std::uint8_t>(y));
      if (m == eta_mask ? std::abs(rhs - estimate) > 1e-9 : rhs > bound + 1e-9) ++cut_violations;
    }
  }

  int bound_violations = 0;
  for (int s = 0; s < 10; ++s) {
    const int n = 1 + s % 4;
    const Instance in = generate_instance({n, 4, 3, 1}, 5000 + s);
    RecourseOptions opt;
    opt.method = RecourseMethod::kExact;
    RecourseEvaluator ev(in.pending, in.scenarios, in.fleet, in.params, in.epoch, opt);
    const LowerBound lb = lower_bound(ev, in.pending.size(), true);
    const double all_now = mean_recourse(in, bits((1u << n) - 1, n), RecourseMethod::kExact);
    if (std::abs(lb.value - all_now) > 1e-9) ++bound_violations;
    for (unsigned m = 0; m < (1u << n); ++m)
      if (lb.value > mean_recourse(in, bits(m, n), RecourseMethod::kExact) + 1e-9) ++bound_violations;
  }

  int order_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    const auto eta = bits(static_cast<unsigned>(rng() % (1u << n)), n);
    const double bound = value(rng);
    const double aug = bound + value(rng);
    const double greedy = aug + value(rng);
    const SlimCut cg = make_slim_cut(eta, greedy, bound, RecourseMethod::kGreedy);
    const SlimCut ca = make_slim_cut(eta, aug, bound, RecourseMethod::kAugmented);
    for (unsigned m = 0; m < (1u << n); ++m) {
      const auto y = bits(m, n);
      int signed_sum = 0;
      for (int i = 0; i < n; ++i) signed_sum += eta[i] ? y[i] : -y[i];
      if (signed_sum > ca.selected_count() - 1) continue;
      if (cg.rhs(std::span<const std::uint8_t>(y)) > ca.rhs(std::span<const std::uint8_t>(y)) + 1e-12)
        ++order_violations;
    }
  }
  report(5, cut_violations == 0 && bound_violations == 0 && order_violations == 0 && seconds_since(start) < 60, start,
         fmt("cut validity violations %d, lower-bound violations %d, tier-ordering violations %d", cut_violations,
             bound_violations, order_violations));
}

void routing_oracles() {
  const auto start = Clock::now();
  std::mt19937_64 rng(61);
  CostParams p;
  Fleet fleet;
  double route_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    OrderTable orders;
    std::vector<OrderId> ids;
    for (int i = 0; i < n; ++i) {
      orders.add(oracle::random_order(rng, 100 + i, 1, 4));
      ids.push_back(100 + i);
    }
    const Route refined = refine_route_energy(make_route(1, 0, ids, orders, fleet), orders, fleet, p);
    std::vector<const Order*> ptrs;
    for (OrderId id : ids) ptrs.push_back(&orders.at(id));
    const double best = oracle::best_route_by_permutation(fleet, p, ptrs) + p.kappa;
    route_err = std::max(route_err, std::abs(route_cost(refined, orders, fleet, p).total() - best));
  }

  double plan_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    CostParams params;
    Fleet f;
    f.size = 1 + trial % 2;
    if (trial % 5 == 0) params.kappa = 0.2;
    const int future = 1 + (trial % 4 == 0 ? 1 : trial % 3);
    const int carried = std::min(trial % 3, 4 - future);
    const oracle::RandomInstance ri = oracle::random_instance(rng, carried, future, 5, params.horizon_T);
    const SubproblemInstance inst = build_subproblem(ri.y0, ri.pending, &ri.scenario, f, params, 5);
    plan_err = std::max(plan_err, std::abs(solve_exact(inst).cost - oracle::brute_force_recourse(inst)));
  }
  report(6, route_err <= 1e-9 && plan_err <= 1e-9 && seconds_since(start) < 120, start,
         fmt("200 routes max error %.2e; 50 subproblems max error %.2e", route_err, plan_err));
}

int audit_all(const std::vector<SimulationRun>& runs, const SimulationConfig& cfg) {
  int bad = 0;
  for (const SimulationRun& r : runs)
    if (!audit_run(r, cfg).empty()) ++bad;
  return bad;
}

void ledger_conservation(const SimulateOutcome& headline, const SimulationConfig& headline_cfg) {
  const auto start = Clock::now();
  int runs = 0, bad = 0;
  const SimulationConfig full;
  PolicyConfig single;
  single.kind = PolicyKind::kSingleStage;
  SimulationConfig short_cfg;
  short_cfg.cycles = 4;
  PolicyConfig two;
  two.scenario_count = 4;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    bad += audit_run(simulate(single, full, 70000 + seed), full).empty() ? 0 : 1;
    bad += audit_run(simulate(two, short_cfg, 71000 + seed), short_cfg).empty() ? 0 : 1;
    runs += 2;
  }
  bad += audit_all(headline.single_stage, headline_cfg) + audit_all(headline.two_stage, headline_cfg);
  runs += static_cast<int>(headline.single_stage.size() + headline.two_stage.size());
  report(7, bad == 0, start, fmt("%d audited runs over 100 fuzz seeds plus the headline runs, %d with violations", runs, bad));
}

void headline(const SimulateOutcome& out, Clock::time_point start) {
  const double r = reduction(out.report);
  report(8, out.report.pairs.size() == 10 && r >= 10.0 && seconds_since(start) < 1800, start,
         fmt("two-stage mean total-cost reduction %.2f%% (sd %.2f) over %zu paired replications", r,
             out.report.sd.total, out.report.pairs.size()));
}

void sensitivity_trends() {
  const auto start = Clock::now();
  SensitivityRequest arrival;
  arrival.axis = SensitivityAxis::kArrivalSd;
  arrival.levels = {0.1, 5.0};
  const SensitivityReport a = run_sensitivity(arrival);
  const double low = reduction(a.levels[0].report), high = reduction(a.levels[1].report);

  SensitivityRequest weight;
  weight.axis = SensitivityAxis::kWeightRange;
  weight.levels = {0.5, 1.5, 2.5, 3.5, 4.5};
  const SensitivityReport w = run_sensitivity(weight);
  double lo = 1e300, hi = -1e300;
  std::string series;
  for (const SensitivityLevel& l : w.levels) {
    const double r = reduction(l.report);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    series += fmt(" %.1f", r);
  }
  report(9, high < low && hi - lo < 10.0 && seconds_since(start) < 3600, start,
         fmt("arrival_sd 0.1 -> 5: %.2f%% -> %.2f%%; weight-range reductions%s (spread %.2f pp)", low, high,
             series.c_str(), hi - lo));
}

std::string solve_bytes(const Instance& in, const SolveRequest& req) {
  return io::dump(io::result_document(solve_instance(in, req), req, in));
}

std::string simulate_bytes(const SimulateRequest& req) {
  const SimulateOutcome out = run_simulation(req);
  return io::ledger_csv(out) + io::comparison_csv(out.report) + io::dump(io::simulate_plot_document(out, req));
}

void determinism() {
  const auto start = Clock::now();
  bool ok = true;
  double drift = 0.0;
  for (int s = 0; s < 3; ++s) {
    const Instance in = generate_instance({5, 5, 5, 1}, 9000 + s);
    for (SolveMethod m : {SolveMethod::kTwoTier, SolveMethod::kExact, SolveMethod::kOracle}) {
      SolveRequest req;
      req.method = m;
      req.oracle_caps = OracleCaps{6, 12, 10};
      req.threads = 1;
      const std::string first = solve_bytes(in, req);
      ok = ok && first == solve_bytes(in, req);
      const double serial = solve_instance(in, req).objective;
      req.threads = 3;
      drift = std::max(drift, std::abs(solve_instance(in, req).objective - serial));
    }
  }

  SimulateRequest sim;
  sim.sim.cycles = 6;
  sim.replications = 3;
  sim.seed = 17;
  sim.two_stage.scenario_count = 4;
  sim.threads = 1;
  const std::string first = simulate_bytes(sim);
  ok = ok && first == simulate_bytes(sim);
  const SimulateOutcome serial = run_simulation(sim);
  sim.threads = 3;
  const SimulateOutcome parallel = run_simulation(sim);
  for (std::size_t i = 0; i < serial.two_stage.size(); ++i) {
    drift = std::max(drift, std::abs(serial.two_stage[i].totals.total() - parallel.two_stage[i].totals.total()));
    drift = std::max(drift, std::abs(serial.single_stage[i].totals.total() - parallel.single_stage[i].totals.total()));
  }
  report(10, ok && drift <= 1e-9, start,
         fmt("repeated serial outputs byte-identical: %s; max objective drift at 3 threads %.2e", ok ? "yes" : "no",
             drift));
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--strict] [--only N]\n", argv[0]);
      return 2;
    }
  }
  auto wanted = [&](int id) { return only == 0 || only == id; };
  try {
    if (wanted(1)) exactness();
    if (wanted(2) || wanted(3)) heuristic_quality_and_speed();
    if (wanted(4)) subproblem_gaps();
    if (wanted(5)) propositions();
    if (wanted(6)) routing_oracles();
    if (wanted(7) || wanted(8)) {
      const auto sim_start = Clock::now();
      const SimulateRequest base;
      const SimulateOutcome base_out = run_simulation(base);
      const auto sim_time = Clock::now() - sim_start;
      ledger_conservation(base_out, base.sim);
      headline(base_out, Clock::now() - sim_time);
    }
    if (wanted(9)) sensitivity_trends();
    if (wanted(10)) determinism();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return strict ? failures : 0;
}
