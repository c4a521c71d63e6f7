// Command-line front end over the C interface: gen, solve, bench, simulate and
// sensitivity. Flags override fields of an optional JSON config document.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dof/dof.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSizeLimit = 3;
constexpr int kExitBudget = 4;

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

int exit_code(dof_status s) {
  switch (s) {
    case DOF_OK: return kExitOk;
    case DOF_ERR_CONFIG:
    case DOF_ERR_ARGUMENT: return kExitConfig;
    case DOF_ERR_SIZE_LIMIT: return kExitSizeLimit;
    case DOF_ERR_BUDGET_EXHAUSTED: return kExitBudget;
    default: return kExitFailure;
  }
}

void check(dof_status s) {
  if (s != DOF_OK) throw CliError(exit_code(s), std::string(dof_status_name(s)) + ": " + dof_last_error());
}

// Owns a string returned by the library.
std::string take(char* text) {
  std::string out = text ? text : "";
  dof_string_free(text);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitConfig, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw CliError(kExitFailure, "cannot write '" + tmp + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CliError(kExitFailure, "cannot move output into '" + path + "'");
  }
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_text(path, text);
}

std::filesystem::path output_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw CliError(kExitFailure, "cannot create directory '" + path + "'");
  return path;
}

struct Options {
  std::string config;
  std::string instance;
  std::string out;
  std::string mode;
  std::string axis;
  std::vector<double> levels;
  double nu = 0.0;
  double time_budget = 0.0;
  int scenarios = 0;
  int replications = 0;
  int parallel = 0;
  int pending = 0;
  int scenario_orders = 0;
  int max_age = 0;
  int instances = 0;
  int cycles = 0;
  std::uint64_t seed = 0;
  bool verbose = false;
};

// Set only when the flag was given on the command line.
template <class T>
void set_if(const CLI::Option* opt, Json& target, const char* key, const T& value) {
  if (opt && opt->count() > 0) target[key] = value;
}

Json load_config(const std::string& path, const char* schema) {
  if (path.empty()) return Json{{"schema", schema}, {"version", 1}};
  try {
    Json doc = Json::parse(read_text(path));
    if (!doc.is_object()) throw CliError(kExitConfig, "'" + path + "' is not a JSON object");
    return doc;
  } catch (const Json::parse_error& e) {
    throw CliError(kExitConfig, "'" + path + "': " + e.what());
  }
}

int default_parallel() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Flags {
  CLI::Option* seed = nullptr;
  CLI::Option* scenarios = nullptr;
  CLI::Option* nu = nullptr;
  CLI::Option* time_budget = nullptr;
  CLI::Option* parallel = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* replications = nullptr;
  CLI::Option* pending = nullptr;
  CLI::Option* scenario_orders = nullptr;
  CLI::Option* max_age = nullptr;
  CLI::Option* instances = nullptr;
  CLI::Option* cycles = nullptr;
  CLI::Option* axis = nullptr;
  CLI::Option* levels = nullptr;
};

int cmd_gen(const Options& o, const Flags& f) {
  Json doc = load_config(o.config, "dof.gen_config");
  set_if(f.pending, doc, "pending_orders", o.pending);
  set_if(f.scenario_orders, doc, "scenario_orders", o.scenario_orders);
  set_if(f.scenarios, doc, "scenarios", o.scenarios);
  set_if(f.max_age, doc, "max_age", o.max_age);
  set_if(f.seed, doc, "seed", o.seed);
  dof_instance* in = nullptr;
  check(dof_instance_generate(doc.dump().c_str(), &in));
  char* text = nullptr;
  const dof_status s = dof_instance_to_json(in, &text);
  dof_instance_free(in);
  check(s);
  write_or_print(o.out, take(text));
  return kExitOk;
}

void print_trace(const char* line, void*) { std::cerr << line << '\n'; }

int cmd_solve(const Options& o, const Flags& f) {
  Json doc = load_config(o.config, "dof.solve_config");
  set_if(f.mode, doc, "mode", o.mode);
  set_if(f.scenarios, doc, "scenarios", o.scenarios);
  if (f.nu->count()) doc["solver"]["nu"] = o.nu;
  if (f.time_budget->count()) doc["solver"]["time_budget_s"] = o.time_budget;
  if (f.parallel->count())
    doc["parallel"] = o.parallel;
  else if (!doc.contains("parallel"))
    doc["parallel"] = default_parallel();

  dof_instance* in = nullptr;
  check(dof_instance_from_json(read_text(o.instance).c_str(), &in));
  dof_result* r = nullptr;
  const dof_status s = dof_solve_traced(in, doc.dump().c_str(), o.verbose ? print_trace : nullptr, nullptr, &r);
  dof_instance_free(in);
  check(s);
  char* json = nullptr;
  char* summary = nullptr;
  dof_status js = dof_result_to_json(r, &json);
  dof_status ss = js == DOF_OK ? dof_result_summary(r, &summary) : js;
  const dof_status status = dof_result_status(r);
  dof_result_free(r);
  check(js);
  check(ss);
  if (o.out.empty()) {
    std::cout << take(json);
    std::cerr << take(summary);
  } else {
    write_text(o.out, take(json));
    std::cout << take(summary);
  }
  if (status != DOF_OK) std::cerr << "search budget exhausted before optimality was proven\n";
  return exit_code(status);
}

int cmd_bench(const Options& o, const Flags& f) {
  Json doc = load_config(o.config, "dof.bench_config");
  set_if(f.instances, doc, "instances", o.instances);
  set_if(f.scenarios, doc, "scenarios", o.scenarios);
  set_if(f.seed, doc, "seed", o.seed);
  if (f.nu->count()) doc["solver"]["nu"] = o.nu;
  if (f.time_budget->count()) doc["solver"]["time_budget_s"] = o.time_budget;
  const int threads = f.parallel->count() ? o.parallel : default_parallel();
  char* csv = nullptr;
  check(dof_bench(doc.dump().c_str(), threads, &csv));
  write_or_print(o.out, take(csv));
  return kExitOk;
}

void apply_simulation_flags(Json& doc, const Options& o, const Flags& f) {
  set_if(f.seed, doc, "seed", o.seed);
  set_if(f.replications, doc, "replications", o.replications);
  set_if(f.cycles, doc, "cycles", o.cycles);
  if (f.scenarios->count()) doc["policy"]["scenario_count"] = o.scenarios;
  if (f.mode->count()) doc["policy"]["solver"]["mode"] = o.mode;
  if (f.nu->count()) doc["policy"]["solver"]["nu"] = o.nu;
  if (f.time_budget->count()) doc["policy"]["solver"]["time_budget_s"] = o.time_budget;
  if (f.parallel->count())
    doc["parallel"] = o.parallel;
  else if (!doc.contains("parallel"))
    doc["parallel"] = default_parallel();
}

int cmd_simulate(const Options& o, const Flags& f) {
  Json doc = load_config(o.config, "dof.simulate_config");
  apply_simulation_flags(doc, o, f);
  dof_simulation* sim = nullptr;
  check(dof_simulate(doc.dump().c_str(), &sim));
  std::string ledger, comparison, plot, summary;
  char* text = nullptr;
  dof_status s = dof_simulation_ledger_csv(sim, &text);
  if (s == DOF_OK) ledger = take(text);
  if (s == DOF_OK && (s = dof_simulation_comparison_csv(sim, &text)) == DOF_OK) comparison = take(text);
  if (s == DOF_OK && (s = dof_simulation_plot_json(sim, &text)) == DOF_OK) plot = take(text);
  if (s == DOF_OK && (s = dof_simulation_summary(sim, &text)) == DOF_OK) summary = take(text);
  dof_simulation_free(sim);
  check(s);
  if (o.out.empty()) {
    std::cout << comparison;
    std::cerr << summary;
    return kExitOk;
  }
  const auto dir = output_dir(o.out);
  write_text((dir / "ledger.csv").string(), ledger);
  write_text((dir / "comparison.csv").string(), comparison);
  write_text((dir / "plot.json").string(), plot);
  std::cout << summary;
  return kExitOk;
}

int cmd_sensitivity(const Options& o, const Flags& f) {
  Json doc = load_config(o.config, "dof.sensitivity_config");
  apply_simulation_flags(doc, o, f);
  set_if(f.axis, doc, "axis", o.axis);
  set_if(f.levels, doc, "levels", o.levels);
  dof_sensitivity* sweep = nullptr;
  check(dof_sensitivity_run(doc.dump().c_str(), &sweep));
  std::string csv, plot, summary;
  char* text = nullptr;
  dof_status s = dof_sensitivity_csv(sweep, &text);
  if (s == DOF_OK) csv = take(text);
  if (s == DOF_OK && (s = dof_sensitivity_plot_json(sweep, &text)) == DOF_OK) plot = take(text);
  if (s == DOF_OK && (s = dof_sensitivity_summary(sweep, &text)) == DOF_OK) summary = take(text);
  dof_sensitivity_free(sweep);
  check(s);
  if (o.out.empty()) {
    std::cout << csv;
    std::cerr << summary;
    return kExitOk;
  }
  const auto dir = output_dir(o.out);
  write_text((dir / "sensitivity.csv").string(), csv);
  write_text((dir / "plot.json").string(), plot);
  std::cout << summary;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic order fulfillment: instance generation, solves, benchmarks and simulations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dof_version()));
  Options o;
  Flags f;

  auto config_opt = [&](CLI::App* c, const char* what) {
    c->add_option("--config", o.config, std::string("JSON ") + what + " document")->check(CLI::ExistingFile);
  };
  auto common_solver = [&](CLI::App* c) {
    c->add_option("--nu", o.nu, "greedy-cut gate in [0, 1]");
    c->add_option("--time-budget", o.time_budget, "branch-and-cut wall-clock budget in seconds");
    c->add_option("--parallel", o.parallel, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
  };

  CLI::App* gen = app.add_subcommand("gen", "Generate a self-contained benchmark instance");
  config_opt(gen, "dof.gen_config");
  gen->add_option("--pending", o.pending, "pending orders");
  gen->add_option("--scenario-orders", o.scenario_orders, "orders per scenario");
  gen->add_option("--scenarios", o.scenarios, "scenario count");
  gen->add_option("--max-age", o.max_age, "oldest pending order age in cycles");
  gen->add_option("--seed", o.seed, "generation seed");
  gen->add_option("--out", o.out, "instance file (default: stdout)");

  CLI::App* solve = app.add_subcommand("solve", "Solve one instance");
  config_opt(solve, "dof.solve_config");
  solve->add_option("--instance", o.instance, "instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--mode", o.mode, "two_tier | greedy | augmented | exact | oracle | myopic");
  solve->add_option("--scenarios", o.scenarios, "use only the first N scenarios");
  solve->add_option("--out", o.out, "result file (default: stdout)");
  solve->add_flag("--verbose,-v", o.verbose, "print the branch-and-cut trace to stderr");

  CLI::App* bench = app.add_subcommand("bench", "Compare every solve mode on a generated suite");
  config_opt(bench, "dof.bench_config");
  bench->add_option("--instances", o.instances, "suite size");
  bench->add_option("--scenarios", o.scenarios, "scenarios per instance");
  bench->add_option("--seed", o.seed, "seed of the first instance");
  bench->add_option("--out", o.out, "CSV file (default: stdout)");

  CLI::App* simulate = app.add_subcommand("simulate", "Paired rolling-horizon simulation of both policies");
  config_opt(simulate, "dof.simulate_config");
  CLI::App* sensitivity = app.add_subcommand("sensitivity", "Paired simulations across uncertainty levels");
  config_opt(sensitivity, "dof.sensitivity_config");
  for (CLI::App* c : {simulate, sensitivity}) {
    c->add_option("--mode", o.mode, "two-stage solve mode");
    c->add_option("--scenarios", o.scenarios, "scenarios sampled per epoch");
    c->add_option("--seed", o.seed, "stream seed");
    c->add_option("--replications", o.replications, "paired replications");
    c->add_option("--cycles", o.cycles, "simulated cycles");
    c->add_option("--out", o.out, "output directory (default: comparison table on stdout)");
  }
  sensitivity->add_option("--axis", o.axis, "arrival_sd | location_sd | weight_range");
  sensitivity->add_option("--levels", o.levels, "sweep levels")->delimiter(',');

  for (CLI::App* c : {solve, bench, simulate, sensitivity}) common_solver(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  // Options are registered per subcommand, so bind the chosen command's flags.
  CLI::App* chosen = app.get_subcommands().front();
  auto opt = [&](const char* name) -> CLI::Option* {
    try {
      return chosen->get_option(name);
    } catch (const CLI::OptionNotFound&) {
      return nullptr;
    }
  };
  f.seed = opt("--seed");
  f.scenarios = opt("--scenarios");
  f.nu = opt("--nu");
  f.time_budget = opt("--time-budget");
  f.parallel = opt("--parallel");
  f.mode = opt("--mode");
  f.replications = opt("--replications");
  f.pending = opt("--pending");
  f.scenario_orders = opt("--scenario-orders");
  f.max_age = opt("--max-age");
  f.instances = opt("--instances");
  f.cycles = opt("--cycles");
  f.axis = opt("--axis");
  f.levels = opt("--levels");

  try {
    if (chosen == gen) return cmd_gen(o, f);
    if (chosen == solve) return cmd_solve(o, f);
    if (chosen == bench) return cmd_bench(o, f);
    if (chosen == simulate) return cmd_simulate(o, f);
    return cmd_sensitivity(o, f);
  } catch (const CliError& e) {
    std::cerr << "dof-cli: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "dof-cli: " << e.what() << '\n';
    return kExitFailure;
  }
}
