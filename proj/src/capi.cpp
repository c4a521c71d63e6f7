#include "dof/dof.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "dof/commands.hpp"
#include "dof/error.hpp"
#include "dof/io.hpp"

struct dof_instance {
  dof::Instance value;
};

struct dof_result {
  dof::SolveOutcome outcome;
  dof::SolveRequest request;
  dof::Instance instance;
};

struct dof_simulation {
  dof::SimulateRequest request;
  dof::SimulateOutcome outcome;
};

struct dof_sensitivity {
  dof::SensitivityRequest request;
  dof::SensitivityReport report;
};

namespace {

thread_local std::string last_error;

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class F>
dof_status guarded(F&& body) {
  try {
    body();
    return DOF_OK;
  } catch (const dof::Error& e) {
    last_error = e.what();
    return static_cast<dof_status>(e.code());
  } catch (const ArgumentError& e) {
    last_error = e.what();
    return DOF_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DOF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DOF_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return DOF_ERR_INTERNAL;
  }
}

void require(const void* p, const char* name) {
  if (!p) throw ArgumentError(std::string(name) + " must not be null");
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs `make` and stores its text in *out.
template <class F>
dof_status emit(char** out, F&& make) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    *out = copy_out(make());
  });
}

std::string format(const char* fmt, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

std::string result_summary(const dof_result& r) {
  const dof::SolveOutcome& o = r.outcome;
  int served = 0;
  for (auto b : o.y0) served += b;
  std::string s = std::string("mode ") + dof::to_string(o.method);
  if (o.stats) s += std::string(" (") + dof::to_string(o.resolved_mode) + ")";
  s += "\nobjective " + format("%.6f", o.objective) + "  first stage " + format("%.6f", o.first_stage.total()) +
       "  recourse " + format("%.6f", o.recourse) + "\n";
  s += "serve now " + std::to_string(served) + " of " + std::to_string(o.y0.size()) + " pending, " +
       std::to_string(o.routes.size()) + " route(s), " + std::to_string(o.scenarios_used) + " scenario(s)\n";
  if (o.stats) {
    const dof::LShapedStats& st = *o.stats;
    s += "nodes " + std::to_string(st.nodes_created) + "  lp solves " + std::to_string(st.lp_solves) + "  cuts g/a/e " +
         std::to_string(st.greedy_cuts) + "/" + std::to_string(st.augmented_cuts) + "/" +
         std::to_string(st.exact_cuts) + "  proven " + (st.proven ? "yes" : "no") +
         (st.budget_exhausted ? "  (budget exhausted)" : "") + "\n";
  }
  if (o.method == dof::SolveMethod::kOracle) s += "selections enumerated " + std::to_string(o.enumerated_count) + "\n";
  s += "wall time " + format("%.1f", o.wall_time_ms) + " ms\n";
  return s;
}

std::string change_line(const dof::CostChange& mean, const dof::CostChange& sd) {
  return format("total %+.2f%% (sd %.2f)  delay %+.2f%%  distance %+.2f%%", mean.total, sd.total, mean.delay,
                mean.distance) +
         format("  energy %+.2f%%  dispatch %+.2f%%", mean.energy, mean.dispatch);
}

}  // namespace

extern "C" {

const char* dof_version(void) { return "1.0.0"; }

const char* dof_status_name(dof_status status) {
  switch (status) {
    case DOF_OK: return "ok";
    case DOF_ERR_INTERNAL: return "internal";
    case DOF_ERR_CONFIG: return "config";
    case DOF_ERR_SIZE_LIMIT: return "size_limit";
    case DOF_ERR_BUDGET_EXHAUSTED: return "budget_exhausted";
    case DOF_ERR_IO: return "io";
    case DOF_ERR_DOMAIN: return "domain";
    case DOF_ERR_PLAN_INCONSISTENCY: return "plan_inconsistency";
    case DOF_ERR_CUT: return "cut";
    case DOF_ERR_PAIRING: return "pairing";
    case DOF_ERR_ROUTE_INFEASIBLE: return "route_infeasible";
    case DOF_ERR_ARGUMENT: return "argument";
  }
  return "unknown";
}

const char* dof_last_error(void) { return last_error.c_str(); }

void dof_string_free(char* text) { std::free(text); }

dof_status dof_instance_generate(const char* gen_config, dof_instance** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    dof::GenRequest req;
    if (gen_config) req = dof::io::gen_from_document(dof::io::parse(gen_config));
    req.validate();
    *out = new dof_instance{dof::generate_instance(req.shape, req.seed, req.fleet, req.params)};
  });
}

dof_status dof_instance_from_json(const char* instance_json, dof_instance** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    require(instance_json, "instance_json");
    *out = new dof_instance{dof::io::instance_from_document(dof::io::parse(instance_json))};
  });
}

dof_status dof_instance_to_json(const dof_instance* instance, char** out) {
  return emit(out, [&] {
    require(instance, "instance");
    return dof::io::dump(dof::io::instance_document(instance->value));
  });
}

size_t dof_instance_pending_count(const dof_instance* instance) { return instance ? instance->value.pending.size() : 0; }

size_t dof_instance_scenario_count(const dof_instance* instance) {
  return instance ? instance->value.scenarios.size() : 0;
}

void dof_instance_free(dof_instance* instance) { delete instance; }

dof_status dof_solve(const dof_instance* instance, const char* solve_config, dof_result** out) {
  return dof_solve_traced(instance, solve_config, nullptr, nullptr, out);
}

dof_status dof_solve_traced(const dof_instance* instance, const char* solve_config, dof_trace_fn trace, void* user,
                            dof_result** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    require(instance, "instance");
    dof::SolveRequest req;
    if (solve_config) req = dof::io::solve_from_document(dof::io::parse(solve_config));
    dof::SolveRequest run = req;
    if (trace)
      run.solver.trace = [trace, user](const dof::TraceEvent& e) {
        char line[256];
        std::snprintf(line, sizeof line, "iter %d node %d theta %.6f estimate %.6f incumbent %.6f %s", e.iteration,
                      e.node, e.theta, e.estimate, e.incumbent, e.action);
        trace(line, user);
      };
    dof::SolveOutcome outcome = dof::solve_instance(instance->value, run);
    *out = new dof_result{std::move(outcome), req, instance->value};
  });
}

double dof_result_objective(const dof_result* result) {
  return result ? result->outcome.objective : std::numeric_limits<double>::quiet_NaN();
}

size_t dof_result_selection(const dof_result* result, uint8_t* flags, size_t capacity) {
  if (!result) return 0;
  const auto& y = result->outcome.y0;
  if (flags)
    for (size_t i = 0; i < y.size() && i < capacity; ++i) flags[i] = y[i];
  return y.size();
}

dof_status dof_result_status(const dof_result* result) {
  if (!result) {
    last_error = "result must not be null";
    return DOF_ERR_ARGUMENT;
  }
  return result->outcome.unproven() ? DOF_ERR_BUDGET_EXHAUSTED : DOF_OK;
}

dof_status dof_result_to_json(const dof_result* result, char** out) {
  return emit(out, [&] {
    require(result, "result");
    return dof::io::dump(dof::io::result_document(result->outcome, result->request, result->instance));
  });
}

dof_status dof_result_summary(const dof_result* result, char** out) {
  return emit(out, [&] {
    require(result, "result");
    return result_summary(*result);
  });
}

void dof_result_free(dof_result* result) { delete result; }

dof_status dof_bench(const char* bench_config, int threads, char** csv_out) {
  return emit(csv_out, [&] {
    if (threads < 1) throw dof::ConfigError("parallelism must be at least 1");
    dof::BenchConfig cfg;
    if (bench_config) cfg = dof::io::bench_from_document(dof::io::parse(bench_config));
    return dof::io::bench_csv(dof::run_bench(cfg, threads));
  });
}

dof_status dof_simulate(const char* simulate_config, dof_simulation** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    dof::SimulateRequest req;
    if (simulate_config) req = dof::io::simulate_from_document(dof::io::parse(simulate_config));
    dof::SimulateOutcome outcome = dof::run_simulation(req);
    *out = new dof_simulation{req, std::move(outcome)};
  });
}

double dof_simulation_mean_change(const dof_simulation* sim) {
  return sim ? sim->outcome.report.mean.total : std::numeric_limits<double>::quiet_NaN();
}

dof_status dof_simulation_ledger_csv(const dof_simulation* sim, char** out) {
  return emit(out, [&] {
    require(sim, "sim");
    return dof::io::ledger_csv(sim->outcome);
  });
}

dof_status dof_simulation_comparison_csv(const dof_simulation* sim, char** out) {
  return emit(out, [&] {
    require(sim, "sim");
    return dof::io::comparison_csv(sim->outcome.report);
  });
}

dof_status dof_simulation_plot_json(const dof_simulation* sim, char** out) {
  return emit(out, [&] {
    require(sim, "sim");
    return dof::io::dump(dof::io::simulate_plot_document(sim->outcome, sim->request));
  });
}

dof_status dof_simulation_summary(const dof_simulation* sim, char** out) {
  return emit(out, [&] {
    require(sim, "sim");
    const dof::ComparisonReport& r = sim->outcome.report;
    int fallbacks = 0;
    for (const auto& run : sim->outcome.two_stage) fallbacks += run.fallbacks;
    return "two_stage vs single_stage over " + std::to_string(r.pairs.size()) + " paired replication(s)\n" +
           change_line(r.mean, r.sd) + "\ntrip reductions " + std::to_string(r.trip_reduction_events) +
           "  trip savings " + std::to_string(r.trip_saving_events) + "  myopic fallbacks " +
           std::to_string(fallbacks) + "\n";
  });
}

void dof_simulation_free(dof_simulation* sim) { delete sim; }

dof_status dof_sensitivity_run(const char* sensitivity_config, dof_sensitivity** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    require(sensitivity_config, "sensitivity_config");
    dof::SensitivityRequest req = dof::io::sensitivity_from_document(dof::io::parse(sensitivity_config));
    dof::SensitivityReport report = dof::run_sensitivity(req);
    *out = new dof_sensitivity{std::move(req), std::move(report)};
  });
}

size_t dof_sensitivity_level_count(const dof_sensitivity* sweep) { return sweep ? sweep->report.levels.size() : 0; }

double dof_sensitivity_mean_change(const dof_sensitivity* sweep, size_t index) {
  if (!sweep || index >= sweep->report.levels.size()) return std::numeric_limits<double>::quiet_NaN();
  return sweep->report.levels[index].report.mean.total;
}

dof_status dof_sensitivity_csv(const dof_sensitivity* sweep, char** out) {
  return emit(out, [&] {
    require(sweep, "sweep");
    return dof::io::sensitivity_csv(sweep->report);
  });
}

dof_status dof_sensitivity_plot_json(const dof_sensitivity* sweep, char** out) {
  return emit(out, [&] {
    require(sweep, "sweep");
    return dof::io::dump(dof::io::sensitivity_plot_document(sweep->report, sweep->request));
  });
}

dof_status dof_sensitivity_summary(const dof_sensitivity* sweep, char** out) {
  return emit(out, [&] {
    require(sweep, "sweep");
    std::string s = std::string("axis ") + dof::to_string(sweep->report.axis) + "\n";
    for (const auto& lv : sweep->report.levels)
      s += format("level %-8g ", lv.level) + change_line(lv.report.mean, lv.report.sd) + "\n";
    return s;
  });
}

void dof_sensitivity_free(dof_sensitivity* sweep) { delete sweep; }

}  // extern "C"
