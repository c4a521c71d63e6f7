// Versioned JSON documents for instances, command configs and results, and CSV tables
// for benchmark and simulation outputs. Readers reject unknown fields, wrong value
// types and schema or version mismatches with ConfigError.
#pragma once

#include <string>

#include "dof/bench.hpp"
#include "dof/commands.hpp"
#include "json.hpp"

namespace dof::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kInstanceSchema = "dof.instance";
inline constexpr const char* kGenSchema = "dof.gen_config";
inline constexpr const char* kSolveSchema = "dof.solve_config";
inline constexpr const char* kResultSchema = "dof.result";
inline constexpr const char* kBenchSchema = "dof.bench_config";
inline constexpr const char* kSimulateSchema = "dof.simulate_config";
inline constexpr const char* kSensitivitySchema = "dof.sensitivity_config";
inline constexpr const char* kPlotSchema = "dof.plot_data";

// Parses text, throwing ConfigError with the parser message on malformed input.
Json parse(const std::string& text);
// Two-space indented text with a trailing newline.
std::string dump(const Json& doc);

Json to_json(const Point& p);
Json to_json(const Order& o);
Json to_json(const Route& r);
Json to_json(const ItemizedCost& c);
Json to_json(const CostParams& p);
Json to_json(const VehicleSpec& s);
Json to_json(const Fleet& f);
Json to_json(const DemandProfile& p);
Json to_json(const Scenario& s);
Json to_json(const LShapedConfig& c);
Json to_json(const LShapedStats& s);  // wall time excluded so documents are reproducible
Json to_json(const OracleCaps& c);
Json to_json(const PolicyConfig& p);
Json to_json(const SimulationConfig& c);

// Whole documents carry "schema" and "version" keys.
Json instance_document(const Instance& in);
Instance instance_from_document(const Json& doc);

Json gen_document(const GenRequest& r);
GenRequest gen_from_document(const Json& doc);

Json solve_document(const SolveRequest& r);
SolveRequest solve_from_document(const Json& doc);

Json result_document(const SolveOutcome& out, const SolveRequest& request, const Instance& in);

Json bench_document(const BenchConfig& c);
BenchConfig bench_from_document(const Json& doc);

Json simulate_document(const SimulateRequest& r);
SimulateRequest simulate_from_document(const Json& doc);

Json sensitivity_document(const SensitivityRequest& r);
SensitivityRequest sensitivity_from_document(const Json& doc);

// Per-replication, per-cycle ledgers of both policies with one terminal row per run.
std::string ledger_csv(const SimulateOutcome& out);
// One row per paired replication followed by mean and sd rows.
std::string comparison_csv(const ComparisonReport& report);
// One row per (level, replication) followed by a mean row per level.
std::string sensitivity_csv(const SensitivityReport& report);
// Objective, gap and wall-time columns per method, with mean/sd/max footer rows.
std::string bench_csv(const BenchTable& table);

// Series for external plotting; embeds the generating config.
Json simulate_plot_document(const SimulateOutcome& out, const SimulateRequest& request);
Json sensitivity_plot_document(const SensitivityReport& report, const SensitivityRequest& request);

std::string read_file(const std::string& path);                           // throws IoError
void write_file_atomic(const std::string& path, const std::string& text);  // throws IoError

}  // namespace dof::io
