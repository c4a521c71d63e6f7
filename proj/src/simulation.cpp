#include "dof/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "dof/master.hpp"
#include "dof/parallel.hpp"

namespace dof {

namespace {

constexpr std::uint64_t kPolicyStream = 0x9011C7000ULL;
constexpr std::uint64_t kReplicationStream = 0x4E91000ULL;
constexpr double kAuditTol = 1e-9;

std::vector<OrderId> ids_of(const std::vector<Order>& orders) {
  std::vector<OrderId> out;
  out.reserve(orders.size());
  for (const Order& o : orders) out.push_back(o.id);
  return out;
}

double pct(double a, double b) {
  if (a == 0.0) return b == 0.0 ? 0.0 : 100.0;
  return 100.0 * (b - a) / a;
}

}  // namespace

const char* to_string(PolicyKind p) { return p == PolicyKind::kTwoStage ? "two_stage" : "single_stage"; }

PolicyKind parse_policy(const std::string& s) {
  if (s == "two_stage" || s == "two-stage") return PolicyKind::kTwoStage;
  if (s == "single_stage" || s == "single-stage" || s == "myopic") return PolicyKind::kSingleStage;
  throw ConfigError("unknown policy '" + s + "' (expected two_stage or single_stage)");
}

void PolicyConfig::validate() const {
  solver.validate();
  if (scenario_count < 1) throw ConfigError("scenario_count must be at least 1");
  if (myopic_cap < 0) throw ConfigError("myopic_cap must be non-negative");
}

void SimulationConfig::validate() const {
  profile.validate();
  fleet.validate();
  params.validate();
  if (cycles < 1) throw ConfigError("cycles must be at least 1");
}

SimulationRun simulate(const PolicyConfig& policy, const SimulationConfig& config, std::uint64_t seed,
                       int replication) {
  policy.validate();
  config.validate();
  const CostParams& p = config.params;
  const auto stream = ground_truth_stream(config.profile, config.cycles, seed, 1);
  const std::uint64_t policy_seed = split_seed(seed, kPolicyStream);

  SimulationRun run;
  run.policy = policy.kind;
  run.seed = seed;
  run.replication = replication;
  std::vector<Order> pending;
  for (int t = 0; t < config.cycles; ++t) {
    CycleLedger ledger;
    ledger.cycle = t;
    ledger.carried_in = ids_of(pending);
    for (const Order& o : stream[t]) {
      run.realized.push_back(o);
      if (!o.valid) continue;
      ledger.arrived.push_back(o.id);
      pending.push_back(o);
    }
    std::sort(pending.begin(), pending.end(), [](const Order& a, const Order& b) { return a.id < b.id; });

    std::vector<std::uint8_t> y0(pending.size(), 0);
    if (!pending.empty()) {
      // No cycle follows the last epoch, so the two-stage model has no second stage.
      bool use_myopic = policy.kind == PolicyKind::kSingleStage || t + 1 == config.cycles;
      if (!use_myopic) {
        const auto scenarios = sample_scenarios(config.profile, policy.scenario_count, p.horizon_T,
                                                split_seed(policy_seed, static_cast<std::uint64_t>(t)), t);
        try {
          const LShapedSolution sol = run_lshaped(pending, scenarios, config.fleet, p, t, policy.solver);
          y0 = sol.y0;
          ledger.routes = sol.routes;
          ledger.solver = to_string(sol.mode);
        } catch (const SizeLimitError& e) {
          use_myopic = true;
          ledger.fallback = true;
          ledger.note = e.what();
          ++run.fallbacks;
        }
      }
      if (use_myopic) {
        const MyopicSolution sol = solve_myopic(pending, config.fleet, p, t, policy.myopic_cap);
        y0 = sol.y0;
        ledger.routes = sol.routes;
        ledger.solver = "myopic";
      }
    }

    const OrderTable table(pending);
    std::vector<Order> next;
    for (std::size_t m = 0; m < pending.size(); ++m) {
      if (y0[m]) {
        ledger.fulfilled.push_back(pending[m].id);
        ledger.cost.delay += first_stage_delay(pending[m], t, p);
      } else {
        ledger.deferred.push_back(pending[m].id);
        next.push_back(pending[m]);
      }
    }
    for (const Route& r : ledger.routes) ledger.cost += route_cost(r, table, config.fleet, p);
    ledger.dispatches = static_cast<int>(ledger.routes.size());
    run.totals += ledger.cost;
    run.dispatches += ledger.dispatches;
    run.cycles.push_back(std::move(ledger));
    pending = std::move(next);
  }
  for (const Order& o : pending) {
    run.unfulfilled.push_back(o.id);
    run.terminal.delay += p.alpha * overflow_penalty(o, config.cycles - 1, p);
  }
  run.totals += run.terminal;
  return run;
}

std::vector<std::string> audit_run(const SimulationRun& run, const SimulationConfig& config) {
  std::vector<std::string> issues;
  auto fail = [&](int cycle, const std::string& msg) { issues.push_back("cycle " + std::to_string(cycle) + ": " + msg); };
  const CostParams& p = config.params;
  const VehicleSpec& spec = config.fleet.spec;
  const OrderTable orders(run.realized);
  std::map<int, std::vector<OrderId>> arrivals;
  for (const Order& o : run.realized)
    if (o.valid) arrivals[o.arrival_cycle].push_back(o.id);

  std::set<OrderId> fulfilled_once;
  std::vector<OrderId> previous_deferred;
  ItemizedCost sum;
  int dispatches = 0;
  for (const CycleLedger& c : run.cycles) {
    if (c.carried_in != previous_deferred) fail(c.cycle, "carried-over orders differ from the previous deferral");
    if (c.arrived != arrivals[c.cycle]) fail(c.cycle, "arrivals differ from the stream");
    std::multiset<OrderId> before(c.carried_in.begin(), c.carried_in.end());
    before.insert(c.arrived.begin(), c.arrived.end());
    std::multiset<OrderId> after(c.fulfilled.begin(), c.fulfilled.end());
    after.insert(c.deferred.begin(), c.deferred.end());
    if (before != after) fail(c.cycle, "order conservation violated");
    std::multiset<OrderId> routed;
    ItemizedCost recomputed;
    for (const Route& r : c.routes) {
      routed.insert(r.stops.begin(), r.stops.end());
      if (r.cycle != c.cycle) fail(c.cycle, "route executed in the wrong cycle");
      if (r.stops.empty()) continue;
      if (r.leg_loads.size() != r.stops.size() + 1 || r.leg_charges.size() != r.stops.size() + 2) {
        fail(c.cycle, "route ledger has the wrong shape");
        continue;
      }
      double load = 0, miles = 0, drawn = 0;
      for (OrderId id : r.stops) load += orders.at(id).weight;
      if (std::abs(r.leg_loads.front() - load) > kAuditTol) fail(c.cycle, "departure load differs from payload");
      if (std::abs(r.leg_charges.front() - spec.battery_capacity) > kAuditTol) fail(c.cycle, "vehicle left uncharged");
      Point at = config.fleet.depot;
      for (std::size_t i = 0; i < r.stops.size(); ++i) {
        const Order& o = orders.at(r.stops[i]);
        const double d = distance(at, o.destination);
        const double leg = leg_energy(load, d, spec);
        if (std::abs(r.leg_charges[i] - r.leg_charges[i + 1] - leg) > kAuditTol) fail(c.cycle, "charge ledger mismatch");
        drawn += leg;
        miles += d;
        load -= o.weight;
        if (std::abs(r.leg_loads[i + 1] - std::max(load, 0.0)) > kAuditTol) fail(c.cycle, "load ledger mismatch");
        at = o.destination;
      }
      const double back = distance(at, config.fleet.depot);
      drawn += leg_energy(0.0, back, spec);
      miles += back;
      if (std::abs(r.leg_loads.back()) > kAuditTol) fail(c.cycle, "vehicle returned loaded");
      if (r.leg_charges.back() < -kAuditTol) fail(c.cycle, "battery overdrawn");
      if (std::abs(r.leg_charges.front() - r.leg_charges.back() - drawn) > kAuditTol)
        fail(c.cycle, "charge telescoping violated");
      recomputed.distance += p.beta * miles;
      recomputed.energy += p.gamma * (r.leg_charges.front() - r.leg_charges.back());
      recomputed.dispatch += p.kappa;
    }
    if (routed != std::multiset<OrderId>(c.fulfilled.begin(), c.fulfilled.end()))
      fail(c.cycle, "routed stops differ from fulfilled orders");
    for (OrderId id : c.fulfilled) {
      if (!fulfilled_once.insert(id).second) fail(c.cycle, "order " + std::to_string(id) + " fulfilled twice");
      recomputed.delay += p.alpha * delay_penalty(orders.at(id), c.cycle, p);
    }
    if (std::abs(recomputed.delay - c.cost.delay) > kAuditTol || std::abs(recomputed.distance - c.cost.distance) > kAuditTol ||
        std::abs(recomputed.energy - c.cost.energy) > kAuditTol || std::abs(recomputed.dispatch - c.cost.dispatch) > kAuditTol)
      fail(c.cycle, "itemized cost differs from the route ledgers");
    if (c.dispatches != static_cast<int>(c.routes.size())) fail(c.cycle, "dispatch count mismatch");
    sum += c.cost;
    dispatches += c.dispatches;
    previous_deferred = c.deferred;
  }
  if (run.unfulfilled != previous_deferred) issues.push_back("terminal pending set differs from the last deferral");
  double terminal = 0;
  for (OrderId id : run.unfulfilled) terminal += p.alpha * overflow_penalty(orders.at(id), config.cycles - 1, p);
  if (std::abs(terminal - run.terminal.total()) > kAuditTol) issues.push_back("terminal charge mismatch");
  sum += run.terminal;
  if (std::abs(sum.total() - run.totals.total()) > kAuditTol || std::abs(sum.energy - run.totals.energy) > kAuditTol ||
      std::abs(sum.distance - run.totals.distance) > kAuditTol || std::abs(sum.delay - run.totals.delay) > kAuditTol)
    issues.push_back("run totals differ from the sum of cycle ledgers");
  if (dispatches != run.dispatches) issues.push_back("run dispatch count mismatch");
  const std::size_t accounted = fulfilled_once.size() + run.unfulfilled.size();
  std::size_t valid = 0;
  for (const Order& o : run.realized) valid += o.valid ? 1 : 0;
  if (accounted != valid) issues.push_back("realized orders neither fulfilled nor pending at the end");
  return issues;
}

const char* to_string(SavingMechanism m) {
  switch (m) {
    case SavingMechanism::kTripReduction: return "trip_reduction";
    case SavingMechanism::kTripSaving: return "trip_saving";
    default: return "none";
  }
}

CostChange percent_change(const ItemizedCost& a, const ItemizedCost& b) {
  return CostChange{pct(a.total(), b.total()), pct(a.delay, b.delay), pct(a.distance, b.distance),
                    pct(a.energy, b.energy), pct(a.dispatch, b.dispatch)};
}

SavingMechanism classify_saving(const ItemizedCost& a, int dispatches_a, const ItemizedCost& b, int dispatches_b) {
  if (b.total() >= a.total()) return SavingMechanism::kNone;
  if (dispatches_b < dispatches_a) return SavingMechanism::kTripReduction;
  if (dispatches_b == dispatches_a && b.distance + b.energy < a.distance + a.energy) return SavingMechanism::kTripSaving;
  return SavingMechanism::kNone;
}

ComparisonReport compare_policies(std::span<const SimulationRun> a, std::span<const SimulationRun> b) {
  if (a.size() != b.size())
    throw PairingError("paired comparison needs equal replication counts, got " + std::to_string(a.size()) + " and " +
                       std::to_string(b.size()));
  ComparisonReport report;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const SimulationRun& ra = a[i];
    const SimulationRun& rb = b[i];
    if (ra.seed != rb.seed || ra.cycles.size() != rb.cycles.size())
      throw PairingError("replication " + std::to_string(i) + " is not paired (seeds " + std::to_string(ra.seed) +
                         " and " + std::to_string(rb.seed) + ")");
    PairComparison pc;
    pc.seed = ra.seed;
    pc.a = ra.totals;
    pc.b = rb.totals;
    pc.dispatches_a = ra.dispatches;
    pc.dispatches_b = rb.dispatches;
    pc.change = percent_change(ra.totals, rb.totals);
    pc.mechanism = classify_saving(ra.totals, ra.dispatches, rb.totals, rb.dispatches);
    for (std::size_t t = 0; t + 1 < ra.cycles.size(); ++t) {
      const ItemizedCost ca = ra.cycles[t].cost + ra.cycles[t + 1].cost;
      const ItemizedCost cb = rb.cycles[t].cost + rb.cycles[t + 1].cost;
      const SavingMechanism m = classify_saving(ca, ra.cycles[t].dispatches + ra.cycles[t + 1].dispatches, cb,
                                                rb.cycles[t].dispatches + rb.cycles[t + 1].dispatches);
      if (m == SavingMechanism::kTripReduction) ++pc.trip_reduction_events;
      if (m == SavingMechanism::kTripSaving) ++pc.trip_saving_events;
    }
    report.trip_reduction_events += pc.trip_reduction_events;
    report.trip_saving_events += pc.trip_saving_events;
    report.pairs.push_back(pc);
  }
  const double n = static_cast<double>(report.pairs.size());
  if (n == 0) return report;
  auto fields = [](CostChange& c) { return std::array<double*, 5>{&c.total, &c.delay, &c.distance, &c.energy, &c.dispatch}; };
  for (PairComparison& pc : report.pairs) {
    auto src = fields(pc.change);
    auto dst = fields(report.mean);
    for (int k = 0; k < 5; ++k) *dst[k] += *src[k] / n;
  }
  if (n > 1) {
    for (PairComparison& pc : report.pairs) {
      auto src = fields(pc.change);
      auto mean = fields(report.mean);
      auto dst = fields(report.sd);
      for (int k = 0; k < 5; ++k) *dst[k] += (*src[k] - *mean[k]) * (*src[k] - *mean[k]) / (n - 1);
    }
    for (double* v : fields(report.sd)) *v = std::sqrt(*v);
  }
  return report;
}

std::uint64_t replication_seed(std::uint64_t seed, int replication) {
  return split_seed(seed, kReplicationStream + static_cast<std::uint64_t>(replication));
}

ComparisonReport run_paired(const PolicyConfig& two_stage, const SimulationConfig& config, int replications,
                            std::uint64_t seed, int threads, std::vector<SimulationRun>* single_runs,
                            std::vector<SimulationRun>* two_stage_runs) {
  if (replications < 1) throw ConfigError("replications must be at least 1");
  PolicyConfig single = two_stage;
  single.kind = PolicyKind::kSingleStage;
  PolicyConfig staged = two_stage;
  staged.kind = PolicyKind::kTwoStage;
  std::vector<SimulationRun> a(replications), b(replications);
  parallel_for(static_cast<std::size_t>(2 * replications), threads, [&](std::size_t job) {
    const int r = static_cast<int>(job / 2);
    const std::uint64_t s = replication_seed(seed, r);
    if (job % 2 == 0) a[r] = simulate(single, config, s, r);
    else b[r] = simulate(staged, config, s, r);
  });
  ComparisonReport report = compare_policies(a, b);
  if (single_runs) *single_runs = std::move(a);
  if (two_stage_runs) *two_stage_runs = std::move(b);
  return report;
}

const char* to_string(SensitivityAxis a) {
  switch (a) {
    case SensitivityAxis::kArrivalSd: return "arrival_sd";
    case SensitivityAxis::kLocationSd: return "location_sd";
    case SensitivityAxis::kWeightRange: return "weight_range";
  }
  return "unknown";
}

SensitivityAxis parse_axis(const std::string& s) {
  if (s == "arrival_sd") return SensitivityAxis::kArrivalSd;
  if (s == "location_sd") return SensitivityAxis::kLocationSd;
  if (s == "weight_range") return SensitivityAxis::kWeightRange;
  throw ConfigError("unknown sensitivity axis '" + s + "' (expected arrival_sd, location_sd or weight_range)");
}

DemandProfile apply_level(const DemandProfile& base, SensitivityAxis axis, double level) {
  if (!(level >= 0.0) || !std::isfinite(level)) throw ConfigError("sensitivity level must be finite and non-negative");
  DemandProfile p = base;
  switch (axis) {
    case SensitivityAxis::kArrivalSd:
      for (Cluster& c : p.clusters) c.arrival_sd = level;
      break;
    case SensitivityAxis::kLocationSd:
      for (Cluster& c : p.clusters) c.spread = level;
      break;
    case SensitivityAxis::kWeightRange: {
      const double mid = 0.5 * (base.weight_min + base.weight_max);
      p.weight_min = std::max(0.1, mid - level);
      p.weight_max = mid + level;
      break;
    }
  }
  p.validate();
  return p;
}

SensitivityReport sensitivity_suite(const SimulationConfig& base, SensitivityAxis axis, std::span<const double> levels,
                                    int replications, std::uint64_t seed, const PolicyConfig& two_stage,
                                    int threads) {
  if (levels.empty()) throw ConfigError("sensitivity sweep needs at least one level");
  SensitivityReport report;
  report.axis = axis;
  for (double level : levels) {
    SimulationConfig cfg = base;
    cfg.profile = apply_level(base.profile, axis, level);
    report.levels.push_back(SensitivityLevel{level, run_paired(two_stage, cfg, replications, seed, threads)});
  }
  return report;
}

}  // namespace dof
