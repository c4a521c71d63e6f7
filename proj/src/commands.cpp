#include "dof/commands.hpp"

#include <chrono>

#include "dof/error.hpp"

namespace dof {

void GenRequest::validate() const {
  if (shape.pending_orders < 0 || shape.scenario_orders < 0) throw ConfigError("order counts must be non-negative");
  if (shape.scenarios < 1) throw ConfigError("an instance needs at least one scenario");
  if (shape.max_age < 0) throw ConfigError("max_age must be non-negative");
  fleet.validate();
  params.validate();
}

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::kTwoTier: return "two_tier";
    case SolveMethod::kGreedy: return "greedy";
    case SolveMethod::kAugmented: return "augmented";
    case SolveMethod::kExact: return "exact";
    case SolveMethod::kOracle: return "oracle";
    default: return "myopic";
  }
}

SolveMethod parse_solve_method(const std::string& s) {
  if (s == "oracle") return SolveMethod::kOracle;
  if (s == "myopic" || s == "single_stage" || s == "single-stage") return SolveMethod::kMyopic;
  try {
    switch (parse_solve_mode(s)) {
      case SolveMode::kGreedyOnly: return SolveMethod::kGreedy;
      case SolveMode::kAugmentedOnly: return SolveMethod::kAugmented;
      case SolveMode::kExact: return SolveMethod::kExact;
      default: return SolveMethod::kTwoTier;
    }
  } catch (const ConfigError&) {
    throw ConfigError("unknown solve mode '" + s + "' (expected two_tier, greedy, augmented, exact, oracle or myopic)");
  }
}

void SolveRequest::validate() const {
  solver.validate();
  if (myopic_cap < 0) throw ConfigError("myopic_cap must be non-negative");
  if (scenario_limit < 0) throw ConfigError("scenario limit must be non-negative");
  if (threads < 1) throw ConfigError("parallelism must be at least 1");
}

SolveOutcome solve_instance(const Instance& in, const SolveRequest& request) {
  request.validate();
  const auto start = std::chrono::steady_clock::now();
  std::span<const Scenario> scenarios(in.scenarios);
  if (request.scenario_limit > 0) {
    if (request.scenario_limit > static_cast<int>(in.scenarios.size()))
      throw ConfigError("requested " + std::to_string(request.scenario_limit) + " scenarios but the instance has " +
                        std::to_string(in.scenarios.size()));
    scenarios = scenarios.first(static_cast<std::size_t>(request.scenario_limit));
  }

  SolveOutcome out;
  out.method = request.method;
  out.scenarios_used = static_cast<int>(scenarios.size());
  switch (request.method) {
    case SolveMethod::kOracle: {
      const OracleResult r =
          solve_ef_exact(in.pending, scenarios, in.fleet, in.params, in.epoch, request.oracle_caps, request.threads);
      const FirstStagePlan plan = first_stage_routes(r.optimal_y0, in.pending, in.fleet, in.params, in.epoch);
      out.objective = r.optimal_objective;
      out.y0 = r.optimal_y0;
      out.routes = plan.routes;
      out.first_stage = plan.cost;
      out.recourse = r.optimal_objective - r.first_stage_cost;
      out.per_scenario_recourse = r.per_scenario_recourse;
      out.enumerated_count = r.enumerated_count;
      out.resolved_mode = SolveMode::kExact;
      break;
    }
    case SolveMethod::kMyopic: {
      const MyopicSolution r = solve_myopic(in.pending, in.fleet, in.params, in.epoch, request.myopic_cap);
      out.objective = r.objective;
      out.y0 = r.y0;
      out.routes = r.routes;
      out.first_stage = r.first_stage;
      out.recourse = r.overflow_cost;
      break;
    }
    default: {
      LShapedConfig cfg = request.solver;
      cfg.recourse.threads = request.threads;
      switch (request.method) {
        case SolveMethod::kGreedy: cfg.mode = SolveMode::kGreedyOnly; break;
        case SolveMethod::kAugmented: cfg.mode = SolveMode::kAugmentedOnly; break;
        case SolveMethod::kExact: cfg.mode = SolveMode::kExact; break;
        default: cfg.mode = SolveMode::kTwoTier; break;
      }
      const LShapedSolution r = run_lshaped(in.pending, scenarios, in.fleet, in.params, in.epoch, cfg);
      out.objective = r.objective;
      out.y0 = r.y0;
      out.routes = r.routes;
      out.first_stage = r.first_stage;
      out.recourse = r.recourse;
      out.lower_bound = r.lower_bound;
      out.stats = r.stats;
      out.resolved_mode = r.mode;
      break;
    }
  }
  out.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void SimulateRequest::validate() const {
  sim.validate();
  two_stage.validate();
  if (two_stage.kind != PolicyKind::kTwoStage) throw ConfigError("the compared policy must be two_stage");
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (threads < 1) throw ConfigError("parallelism must be at least 1");
}

SimulateOutcome run_simulation(const SimulateRequest& request) {
  request.validate();
  SimulateOutcome out;
  out.report = run_paired(request.two_stage, request.sim, request.replications, request.seed, request.threads,
                          &out.single_stage, &out.two_stage);
  return out;
}

void SensitivityRequest::validate() const {
  base.validate();
  if (levels.empty()) throw ConfigError("sensitivity sweep needs at least one level");
}

SensitivityReport run_sensitivity(const SensitivityRequest& request) {
  request.validate();
  return sensitivity_suite(request.base.sim, request.axis, request.levels, request.base.replications,
                           request.base.seed, request.base.two_stage, request.base.threads);
}

}  // namespace dof
