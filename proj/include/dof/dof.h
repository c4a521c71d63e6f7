/* C interface to the order-fulfillment solvers and simulator.
 *
 * Objects are opaque handles released with their matching *_free function. Configs
 * and results cross the boundary as versioned JSON documents; tables as CSV text.
 * Functions returning dof_status leave a message for dof_last_error() on failure;
 * the message is per thread and valid until the next failing call on that thread.
 * Strings returned through char** are owned by the caller and released with
 * dof_string_free. */
#ifndef DOF_DOF_H
#define DOF_DOF_H

#include <stddef.h>
#include <stdint.h>

#if defined(DOF_BUILDING_LIBRARY)
#define DOF_API __attribute__((visibility("default")))
#else
#define DOF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dof_status {
  DOF_OK = 0,
  DOF_ERR_INTERNAL = 1,
  DOF_ERR_CONFIG = 2,
  DOF_ERR_SIZE_LIMIT = 3,
  DOF_ERR_BUDGET_EXHAUSTED = 4,
  DOF_ERR_IO = 5,
  DOF_ERR_DOMAIN = 6,
  DOF_ERR_PLAN_INCONSISTENCY = 7,
  DOF_ERR_CUT = 8,
  DOF_ERR_PAIRING = 9,
  DOF_ERR_ROUTE_INFEASIBLE = 10,
  DOF_ERR_ARGUMENT = 11
} dof_status;

typedef struct dof_instance dof_instance;
typedef struct dof_result dof_result;
typedef struct dof_simulation dof_simulation;
typedef struct dof_sensitivity dof_sensitivity;

DOF_API const char* dof_version(void);
DOF_API const char* dof_status_name(dof_status status);
DOF_API const char* dof_last_error(void);
DOF_API void dof_string_free(char* text);

/* Instances. gen_config is a "dof.gen_config" document; NULL uses defaults. */
DOF_API dof_status dof_instance_generate(const char* gen_config, dof_instance** out);
DOF_API dof_status dof_instance_from_json(const char* instance_json, dof_instance** out);
DOF_API dof_status dof_instance_to_json(const dof_instance* instance, char** out);
DOF_API size_t dof_instance_pending_count(const dof_instance* instance);
DOF_API size_t dof_instance_scenario_count(const dof_instance* instance);
DOF_API void dof_instance_free(dof_instance* instance);

/* Single solve. solve_config is a "dof.solve_config" document; NULL uses defaults. */
DOF_API dof_status dof_solve(const dof_instance* instance, const char* solve_config, dof_result** out);
/* Receives one line per branch-and-cut iteration outcome. */
typedef void (*dof_trace_fn)(const char* line, void* user);
/* As dof_solve, streaming the iteration trace to `trace` (may be NULL). */
DOF_API dof_status dof_solve_traced(const dof_instance* instance, const char* solve_config, dof_trace_fn trace,
                                    void* user, dof_result** out);
DOF_API double dof_result_objective(const dof_result* result);
/* Copies up to `capacity` selection flags (1 = serve now) and returns the total count. */
DOF_API size_t dof_result_selection(const dof_result* result, uint8_t* flags, size_t capacity);
/* DOF_ERR_BUDGET_EXHAUSTED when a budget stopped the search before optimality was
 * proven, DOF_OK otherwise. */
DOF_API dof_status dof_result_status(const dof_result* result);
/* "dof.result" document without timings, so equal inputs give equal bytes. */
DOF_API dof_status dof_result_to_json(const dof_result* result, char** out);
/* Human-readable summary including wall time. */
DOF_API dof_status dof_result_summary(const dof_result* result, char** out);
DOF_API void dof_result_free(dof_result* result);

/* Benchmark suite from a "dof.bench_config" document (NULL uses defaults); writes the
 * CSV table. */
DOF_API dof_status dof_bench(const char* bench_config, int threads, char** csv_out);

/* Paired policy simulation from a "dof.simulate_config" document. */
DOF_API dof_status dof_simulate(const char* simulate_config, dof_simulation** out);
DOF_API double dof_simulation_mean_change(const dof_simulation* sim);
DOF_API dof_status dof_simulation_ledger_csv(const dof_simulation* sim, char** out);
DOF_API dof_status dof_simulation_comparison_csv(const dof_simulation* sim, char** out);
DOF_API dof_status dof_simulation_plot_json(const dof_simulation* sim, char** out);
DOF_API dof_status dof_simulation_summary(const dof_simulation* sim, char** out);
DOF_API void dof_simulation_free(dof_simulation* sim);

/* Uncertainty sweep from a "dof.sensitivity_config" document. */
DOF_API dof_status dof_sensitivity_run(const char* sensitivity_config, dof_sensitivity** out);
DOF_API size_t dof_sensitivity_level_count(const dof_sensitivity* sweep);
/* Mean total-cost change (percent) at level `index`; NaN when out of range. */
DOF_API double dof_sensitivity_mean_change(const dof_sensitivity* sweep, size_t index);
DOF_API dof_status dof_sensitivity_csv(const dof_sensitivity* sweep, char** out);
DOF_API dof_status dof_sensitivity_plot_json(const dof_sensitivity* sweep, char** out);
DOF_API dof_status dof_sensitivity_summary(const dof_sensitivity* sweep, char** out);
DOF_API void dof_sensitivity_free(dof_sensitivity* sweep);

#ifdef __cplusplus
}
#endif

#endif /* DOF_DOF_H */
