#include "dof/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

#include "dof/error.hpp"

namespace dof::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

// Object view that records which keys were consumed so leftovers can be rejected.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_, "expected an object");
  }

  const Json* find(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  std::string sub(const char* key) const { return path_ + "." + key; }

  template <class T>
  bool get(const char* key, T& out);

  template <class T>
  void require(const char* key, T& out) {
    if (!get(key, out)) fail(path_, std::string("missing field '") + key + "'");
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(path_, "unknown field '" + it.key() + "'");
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read(const Json& v, const std::string& path, Point& out);
void read(const Json& v, const std::string& path, Order& out);
void read(const Json& v, const std::string& path, Cluster& out);
void read(const Json& v, const std::string& path, Scenario& out);

void read(const Json& v, const std::string& path, double& out) {
  if (!v.is_number()) fail(path, "expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) fail(path, "expected a finite number");
}

void read(const Json& v, const std::string& path, int& out) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) fail(path, "integer out of range");
  out = static_cast<int>(x);
}

void read(const Json& v, const std::string& path, std::int64_t& out) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    fail(path, "integer out of range");
  out = v.get<std::int64_t>();
}

void read(const Json& v, const std::string& path, std::uint64_t& out) {
  if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
  out = v.get<std::uint64_t>();
}

void read(const Json& v, const std::string& path, bool& out) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  out = v.get<bool>();
}

void read(const Json& v, const std::string& path, std::string& out) {
  if (!v.is_string()) fail(path, "expected a string");
  out = v.get<std::string>();
}

template <class T>
void read(const Json& v, const std::string& path, std::vector<T>& out) {
  if (!v.is_array()) fail(path, "expected an array");
  out.clear();
  out.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) read(v[i], path + "[" + std::to_string(i) + "]", out[i]);
}

void read(const Json& v, const std::string& path, Point& out) {
  Fields f(v, path);
  f.require("x", out.x);
  f.require("y", out.y);
  f.finish();
}

void read(const Json& v, const std::string& path, Order& out) {
  Fields f(v, path);
  f.require("id", out.id);
  f.require("weight", out.weight);
  f.require("destination", out.destination);
  f.require("arrival_cycle", out.arrival_cycle);
  f.get("urgency", out.urgency);
  f.get("valid", out.valid);
  f.finish();
  if (out.valid && !(out.weight > 0)) fail(path, "a valid order needs positive weight");
  if (!(out.urgency >= 0)) fail(path, "urgency must be non-negative");
}

void read(const Json& v, const std::string& path, CostParams& out) {
  Fields f(v, path);
  f.get("alpha", out.alpha);
  f.get("beta", out.beta);
  f.get("gamma", out.gamma);
  f.get("kappa", out.kappa);
  f.get("penalty_base", out.penalty_base);
  f.get("penalty_rate", out.penalty_rate);
  f.get("horizon_T", out.horizon_T);
  f.get("cycle_minutes", out.cycle_minutes);
  f.finish();
}

void read(const Json& v, const std::string& path, VehicleSpec& out) {
  Fields f(v, path);
  f.get("load_capacity", out.load_capacity);
  f.get("battery_capacity", out.battery_capacity);
  f.get("energy_base", out.energy_base);
  f.get("energy_per_kg", out.energy_per_kg);
  f.get("cruise_speed", out.cruise_speed);
  f.finish();
}

void read(const Json& v, const std::string& path, Fleet& out) {
  Fields f(v, path);
  f.get("size", out.size);
  f.get("depot", out.depot);
  f.get("spec", out.spec);
  f.finish();
}

void read(const Json& v, const std::string& path, Rect& out) {
  Fields f(v, path);
  f.require("min_x", out.min_x);
  f.require("min_y", out.min_y);
  f.require("max_x", out.max_x);
  f.require("max_y", out.max_y);
  f.finish();
}

void read(const Json& v, const std::string& path, Cluster& out) {
  Fields f(v, path);
  f.require("center", out.center);
  f.get("spread", out.spread);
  f.require("arrival_means", out.arrival_means);
  f.get("arrival_sd", out.arrival_sd);
  f.finish();
}

void read(const Json& v, const std::string& path, DemandProfile& out) {
  Fields f(v, path);
  f.get("clusters", out.clusters);
  f.get("weight_min", out.weight_min);
  f.get("weight_max", out.weight_max);
  f.get("map_bounds", out.map_bounds);
  f.get("coord_low_extension", out.coord_low_extension);
  f.get("scenario_orders", out.scenario_orders);
  f.finish();
}

void read(const Json& v, const std::string& path, Scenario& out) {
  Fields f(v, path);
  f.require("index", out.index);
  f.require("seed", out.seed);
  f.require("orders", out.orders);
  f.finish();
}

void read(const Json& v, const std::string& path, OracleCaps& out) {
  Fields f(v, path);
  f.get("max_pending", out.max_pending);
  f.get("max_servable", out.max_servable);
  f.get("max_scenarios", out.max_scenarios);
  f.finish();
  if (out.max_pending < 0 || out.max_servable < 0 || out.max_scenarios < 0)
    fail(path, "oracle caps must be non-negative");
}

void read_recourse(const Json& v, const std::string& path, RecourseOptions& out) {
  Fields f(v, path);
  f.get("max_iterations", out.budget.max_iterations);
  f.get("wall_time_s", out.budget.wall_time_s);
  f.get("lambda_factor", out.gls.lambda_factor);
  f.get("exact_cap", out.exact_cap);
  f.finish();
}

// The solve and bench documents choose the mode elsewhere, so only policy solvers
// carry a "mode" key.
void read_solver(const Json& v, const std::string& path, LShapedConfig& out, bool with_mode) {
  Fields f(v, path);
  if (with_mode) {
    std::string mode = to_string(out.mode);
    f.get("mode", mode);
    try {
      out.mode = parse_solve_mode(mode);
    } catch (const ConfigError& e) {
      fail(f.sub("mode"), e.what());
    }
  }
  f.get("nu", out.nu);
  f.get("max_nodes", out.max_nodes);
  f.get("time_budget_s", out.time_budget_s);
  f.get("master_cap", out.master_cap);
  if (const Json* r = f.find("recourse")) read_recourse(*r, f.sub("recourse"), out.recourse);
  f.finish();
}

Json solver_json(const LShapedConfig& c, bool with_mode) {
  Json j;
  if (with_mode) j["mode"] = to_string(c.mode);
  j["nu"] = c.nu;
  j["max_nodes"] = c.max_nodes;
  j["time_budget_s"] = c.time_budget_s;
  j["master_cap"] = c.master_cap;
  j["recourse"] = {{"max_iterations", c.recourse.budget.max_iterations},
                   {"wall_time_s", c.recourse.budget.wall_time_s},
                   {"lambda_factor", c.recourse.gls.lambda_factor},
                   {"exact_cap", c.recourse.exact_cap}};
  return j;
}

void read_policy(const Json& v, const std::string& path, PolicyConfig& out) {
  Fields f(v, path);
  f.get("scenario_count", out.scenario_count);
  f.get("myopic_cap", out.myopic_cap);
  if (const Json* s = f.find("solver")) read_solver(*s, f.sub("solver"), out.solver, true);
  f.finish();
}

template <class T>
bool Fields::get(const char* key, T& out) {
  const Json* v = find(key);
  if (!v) return false;
  read(*v, sub(key), out);
  return true;
}

Fields open_document(const Json& doc, const char* schema) {
  Fields f(doc, schema);
  std::string name;
  int version = 0;
  f.require("schema", name);
  if (name != schema) fail(schema, "document schema is '" + name + "'");
  f.require("version", version);
  if (version != kSchemaVersion)
    fail(schema, "unsupported version " + std::to_string(version) + " (expected " + std::to_string(kSchemaVersion) +
                     ")");
  return f;
}

Json header(const char* schema) {
  Json j;
  j["schema"] = schema;
  j["version"] = kSchemaVersion;
  return j;
}

void validate_instance(const Instance& in) {
  in.params.validate();
  in.fleet.validate();
  in.profile.validate();
  std::unordered_set<OrderId> ids;
  for (const Order& o : in.pending) {
    if (!o.valid) fail("dof.instance.pending", "pending orders must be valid");
    if (o.arrival_cycle > in.epoch) fail("dof.instance.pending", "order " + std::to_string(o.id) + " arrives after the epoch");
    if (!ids.insert(o.id).second) fail("dof.instance.pending", "duplicate order id " + std::to_string(o.id));
  }
  for (const Scenario& s : in.scenarios) {
    if (s.orders.size() != in.scenarios.front().orders.size())
      fail("dof.instance.scenarios", "scenarios must have equal cardinality");
    std::unordered_set<OrderId> sids;
    for (const Order& o : s.orders) {
      if (ids.count(o.id) || !sids.insert(o.id).second)
        fail("dof.instance.scenarios", "duplicate order id " + std::to_string(o.id));
      if (o.arrival_cycle <= in.epoch || o.arrival_cycle > in.epoch + in.params.horizon_T)
        fail("dof.instance.scenarios", "scenario order " + std::to_string(o.id) + " arrives outside the horizon");
    }
  }
}

std::string num(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Error messages go into a CSV cell, so separators and newlines are flattened.
std::string cell_text(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  return s;
}

std::string join_ids(const std::vector<OrderId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(ids[i]);
  }
  return s;
}

Json change_json(const CostChange& c) {
  return {{"total", c.total}, {"delay", c.delay}, {"distance", c.distance}, {"energy", c.energy},
          {"dispatch", c.dispatch}};
}

std::string change_cells(const CostChange& c) {
  return num(c.total) + "," + num(c.delay) + "," + num(c.distance) + "," + num(c.energy) + "," + num(c.dispatch);
}

Json simulate_body(const SimulateRequest& r) {
  Json j = to_json(r.sim);
  j["policy"] = to_json(r.two_stage);
  j["replications"] = r.replications;
  j["seed"] = r.seed;
  j["parallel"] = r.threads;
  return j;
}

void read_simulate_fields(Fields& f, SimulateRequest& r) {
  f.get("cycles", r.sim.cycles);
  f.get("profile", r.sim.profile);
  f.get("fleet", r.sim.fleet);
  f.get("params", r.sim.params);
  if (const Json* p = f.find("policy")) read_policy(*p, f.sub("policy"), r.two_stage);
  f.get("replications", r.replications);
  f.get("seed", r.seed);
  f.get("parallel", r.threads);
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json to_json(const Point& p) { return {{"x", p.x}, {"y", p.y}}; }

Json to_json(const Order& o) {
  return {{"id", o.id},
          {"weight", o.weight},
          {"destination", to_json(o.destination)},
          {"arrival_cycle", o.arrival_cycle},
          {"urgency", o.urgency},
          {"valid", o.valid}};
}

Json to_json(const Route& r) {
  return {{"vehicle_index", r.vehicle_index},
          {"cycle", r.cycle},
          {"stops", r.stops},
          {"leg_loads", r.leg_loads},
          {"leg_charges", r.leg_charges}};
}

Json to_json(const ItemizedCost& c) {
  return {{"delay", c.delay},       {"distance", c.distance}, {"energy", c.energy},
          {"dispatch", c.dispatch}, {"total", c.total()}};
}

Json to_json(const CostParams& p) {
  return {{"alpha", p.alpha},
          {"beta", p.beta},
          {"gamma", p.gamma},
          {"kappa", p.kappa},
          {"penalty_base", p.penalty_base},
          {"penalty_rate", p.penalty_rate},
          {"horizon_T", p.horizon_T},
          {"cycle_minutes", p.cycle_minutes}};
}

Json to_json(const VehicleSpec& s) {
  return {{"load_capacity", s.load_capacity},
          {"battery_capacity", s.battery_capacity},
          {"energy_base", s.energy_base},
          {"energy_per_kg", s.energy_per_kg},
          {"cruise_speed", s.cruise_speed}};
}

Json to_json(const Fleet& f) { return {{"size", f.size}, {"depot", to_json(f.depot)}, {"spec", to_json(f.spec)}}; }

Json to_json(const DemandProfile& p) {
  Json clusters = Json::array();
  for (const Cluster& c : p.clusters)
    clusters.push_back({{"center", to_json(c.center)},
                        {"spread", c.spread},
                        {"arrival_means", c.arrival_means},
                        {"arrival_sd", c.arrival_sd}});
  return {{"clusters", clusters},
          {"weight_min", p.weight_min},
          {"weight_max", p.weight_max},
          {"map_bounds",
           {{"min_x", p.map_bounds.min_x},
            {"min_y", p.map_bounds.min_y},
            {"max_x", p.map_bounds.max_x},
            {"max_y", p.map_bounds.max_y}}},
          {"coord_low_extension", p.coord_low_extension},
          {"scenario_orders", p.scenario_orders}};
}

Json to_json(const Scenario& s) {
  Json orders = Json::array();
  for (const Order& o : s.orders) orders.push_back(to_json(o));
  return {{"index", s.index}, {"seed", s.seed}, {"orders", orders}};
}

Json to_json(const LShapedConfig& c) { return solver_json(c, true); }

Json to_json(const LShapedStats& s) {
  return {{"nodes_created", s.nodes_created},
          {"nodes_processed", s.nodes_processed},
          {"greedy_cuts", s.greedy_cuts},
          {"augmented_cuts", s.augmented_cuts},
          {"exact_cuts", s.exact_cuts},
          {"lp_solves", s.lp_solves},
          {"recourse_evaluations", s.recourse_evaluations},
          {"proven", s.proven},
          {"budget_exhausted", s.budget_exhausted}};
}

Json to_json(const OracleCaps& c) {
  return {{"max_pending", c.max_pending}, {"max_servable", c.max_servable}, {"max_scenarios", c.max_scenarios}};
}

Json to_json(const PolicyConfig& p) {
  return {{"scenario_count", p.scenario_count}, {"myopic_cap", p.myopic_cap}, {"solver", to_json(p.solver)}};
}

Json to_json(const SimulationConfig& c) {
  return {{"cycles", c.cycles}, {"profile", to_json(c.profile)}, {"fleet", to_json(c.fleet)},
          {"params", to_json(c.params)}};
}

Json instance_document(const Instance& in) {
  Json j = header(kInstanceSchema);
  j["seed"] = in.seed;
  j["epoch"] = in.epoch;
  j["params"] = to_json(in.params);
  j["fleet"] = to_json(in.fleet);
  j["profile"] = to_json(in.profile);
  Json pending = Json::array();
  for (const Order& o : in.pending) pending.push_back(to_json(o));
  j["pending"] = pending;
  Json scenarios = Json::array();
  for (const Scenario& s : in.scenarios) scenarios.push_back(to_json(s));
  j["scenarios"] = scenarios;
  return j;
}

Instance instance_from_document(const Json& doc) {
  Fields f = open_document(doc, kInstanceSchema);
  Instance in;
  f.get("seed", in.seed);
  f.get("epoch", in.epoch);
  f.get("params", in.params);
  f.get("fleet", in.fleet);
  f.get("profile", in.profile);
  f.require("pending", in.pending);
  f.require("scenarios", in.scenarios);
  f.finish();
  validate_instance(in);
  return in;
}

Json gen_document(const GenRequest& r) {
  Json j = header(kGenSchema);
  j["pending_orders"] = r.shape.pending_orders;
  j["scenario_orders"] = r.shape.scenario_orders;
  j["scenarios"] = r.shape.scenarios;
  j["max_age"] = r.shape.max_age;
  j["seed"] = r.seed;
  j["fleet"] = to_json(r.fleet);
  j["params"] = to_json(r.params);
  return j;
}

GenRequest gen_from_document(const Json& doc) {
  Fields f = open_document(doc, kGenSchema);
  GenRequest r;
  f.get("pending_orders", r.shape.pending_orders);
  f.get("scenario_orders", r.shape.scenario_orders);
  f.get("scenarios", r.shape.scenarios);
  f.get("max_age", r.shape.max_age);
  f.get("seed", r.seed);
  f.get("fleet", r.fleet);
  f.get("params", r.params);
  f.finish();
  r.validate();
  return r;
}

Json solve_document(const SolveRequest& r) {
  Json j = header(kSolveSchema);
  j["mode"] = to_string(r.method);
  j["solver"] = solver_json(r.solver, false);
  j["oracle_caps"] = to_json(r.oracle_caps);
  j["myopic_cap"] = r.myopic_cap;
  j["scenarios"] = r.scenario_limit;
  j["parallel"] = r.threads;
  return j;
}

SolveRequest solve_from_document(const Json& doc) {
  Fields f = open_document(doc, kSolveSchema);
  SolveRequest r;
  std::string mode = to_string(r.method);
  f.get("mode", mode);
  r.method = parse_solve_method(mode);
  if (const Json* s = f.find("solver")) read_solver(*s, f.sub("solver"), r.solver, false);
  f.get("oracle_caps", r.oracle_caps);
  f.get("myopic_cap", r.myopic_cap);
  f.get("scenarios", r.scenario_limit);
  f.get("parallel", r.threads);
  f.finish();
  r.validate();
  return r;
}

Json result_document(const SolveOutcome& out, const SolveRequest& request, const Instance& in) {
  Json j = header(kResultSchema);
  j["mode"] = to_string(out.method);
  if (out.stats) j["resolved_mode"] = to_string(out.resolved_mode);
  j["instance_seed"] = in.seed;
  j["epoch"] = in.epoch;
  j["scenarios_used"] = out.scenarios_used;
  j["objective"] = out.objective;
  Json y0 = Json::array();
  for (std::uint8_t b : out.y0) y0.push_back(static_cast<int>(b));
  j["y0"] = y0;
  Json served = Json::array();
  for (std::size_t m = 0; m < out.y0.size(); ++m)
    if (out.y0[m]) served.push_back(in.pending[m].id);
  j["served_ids"] = served;
  j["first_stage"] = to_json(out.first_stage);
  j["recourse"] = out.recourse;
  if (out.stats) {
    j["lower_bound"] = out.lower_bound;
    j["stats"] = to_json(*out.stats);
  }
  if (out.method == SolveMethod::kOracle) {
    j["enumerated_count"] = out.enumerated_count;
    j["per_scenario_recourse"] = out.per_scenario_recourse;
  }
  Json routes = Json::array();
  for (const Route& r : out.routes) routes.push_back(to_json(r));
  j["routes"] = routes;
  Json config = solve_document(request);
  config.erase("schema");
  config.erase("version");
  j["config"] = config;
  return j;
}

Json bench_document(const BenchConfig& c) {
  Json j = header(kBenchSchema);
  j["instances"] = c.instances;
  j["pending_min"] = c.pending_min;
  j["pending_max"] = c.pending_max;
  j["scenario_orders_min"] = c.scenario_orders_min;
  j["scenario_orders_max"] = c.scenario_orders_max;
  j["scenarios"] = c.scenarios;
  j["max_age"] = c.max_age;
  j["seed"] = c.seed;
  j["solver"] = solver_json(c.solver, false);
  j["oracle_caps"] = to_json(c.oracle_caps);
  j["fleet"] = to_json(c.fleet);
  j["params"] = to_json(c.params);
  return j;
}

BenchConfig bench_from_document(const Json& doc) {
  Fields f = open_document(doc, kBenchSchema);
  BenchConfig c;
  f.get("instances", c.instances);
  f.get("pending_min", c.pending_min);
  f.get("pending_max", c.pending_max);
  f.get("scenario_orders_min", c.scenario_orders_min);
  f.get("scenario_orders_max", c.scenario_orders_max);
  f.get("scenarios", c.scenarios);
  f.get("max_age", c.max_age);
  f.get("seed", c.seed);
  if (const Json* s = f.find("solver")) read_solver(*s, f.sub("solver"), c.solver, false);
  f.get("oracle_caps", c.oracle_caps);
  f.get("fleet", c.fleet);
  f.get("params", c.params);
  f.finish();
  c.validate();
  return c;
}

Json simulate_document(const SimulateRequest& r) {
  Json j = header(kSimulateSchema);
  j.update(simulate_body(r));
  return j;
}

SimulateRequest simulate_from_document(const Json& doc) {
  Fields f = open_document(doc, kSimulateSchema);
  SimulateRequest r;
  read_simulate_fields(f, r);
  f.finish();
  r.validate();
  return r;
}

Json sensitivity_document(const SensitivityRequest& r) {
  Json j = header(kSensitivitySchema);
  j.update(simulate_body(r.base));
  j["axis"] = to_string(r.axis);
  j["levels"] = r.levels;
  return j;
}

SensitivityRequest sensitivity_from_document(const Json& doc) {
  Fields f = open_document(doc, kSensitivitySchema);
  SensitivityRequest r;
  read_simulate_fields(f, r.base);
  std::string axis;
  f.require("axis", axis);
  r.axis = parse_axis(axis);
  f.require("levels", r.levels);
  f.finish();
  r.validate();
  return r;
}

std::string ledger_csv(const SimulateOutcome& out) {
  std::ostringstream s;
  s << "policy,replication,seed,cycle,carried_in,arrived,fulfilled,deferred,dispatches,delay,distance,energy,"
       "dispatch,total,solver,fallback,fulfilled_ids\n";
  auto emit = [&](const SimulationRun& run) {
    for (const CycleLedger& c : run.cycles)
      s << to_string(run.policy) << ',' << run.replication << ',' << run.seed << ',' << c.cycle << ','
        << c.carried_in.size() << ',' << c.arrived.size() << ',' << c.fulfilled.size() << ',' << c.deferred.size()
        << ',' << c.dispatches << ',' << num(c.cost.delay) << ',' << num(c.cost.distance) << ','
        << num(c.cost.energy) << ',' << num(c.cost.dispatch) << ',' << num(c.cost.total()) << ',' << c.solver << ','
        << (c.fallback ? 1 : 0) << ',' << join_ids(c.fulfilled) << '\n';
    s << to_string(run.policy) << ',' << run.replication << ',' << run.seed << ",terminal,"
      << run.unfulfilled.size() << ",0,0," << run.unfulfilled.size() << ",0," << num(run.terminal.delay) << ','
      << num(run.terminal.distance) << ',' << num(run.terminal.energy) << ',' << num(run.terminal.dispatch) << ','
      << num(run.terminal.total()) << ",,0,\n";
  };
  for (const SimulationRun& r : out.single_stage) emit(r);
  for (const SimulationRun& r : out.two_stage) emit(r);
  return s.str();
}

std::string comparison_csv(const ComparisonReport& report) {
  std::ostringstream s;
  s << "replication,seed,single_stage_total,two_stage_total,single_stage_dispatches,two_stage_dispatches,total_pct,"
       "delay_pct,distance_pct,energy_pct,dispatch_pct,mechanism,trip_reduction_events,trip_saving_events\n";
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    const PairComparison& p = report.pairs[i];
    s << i << ',' << p.seed << ',' << num(p.a.total()) << ',' << num(p.b.total()) << ',' << p.dispatches_a << ','
      << p.dispatches_b << ',' << change_cells(p.change) << ',' << to_string(p.mechanism) << ','
      << p.trip_reduction_events << ',' << p.trip_saving_events << '\n';
  }
  s << "mean,,,,,," << change_cells(report.mean) << ",," << report.trip_reduction_events << ','
    << report.trip_saving_events << '\n';
  s << "sd,,,,,," << change_cells(report.sd) << ",,,\n";
  return s.str();
}

std::string sensitivity_csv(const SensitivityReport& report) {
  std::ostringstream s;
  s << "axis,level,replication,seed,single_stage_total,two_stage_total,total_pct,delay_pct,distance_pct,energy_pct,"
       "dispatch_pct,mechanism\n";
  for (const SensitivityLevel& lv : report.levels) {
    for (std::size_t i = 0; i < lv.report.pairs.size(); ++i) {
      const PairComparison& p = lv.report.pairs[i];
      s << to_string(report.axis) << ',' << num(lv.level) << ',' << i << ',' << p.seed << ',' << num(p.a.total())
        << ',' << num(p.b.total()) << ',' << change_cells(p.change) << ',' << to_string(p.mechanism) << '\n';
    }
    s << to_string(report.axis) << ',' << num(lv.level) << ",mean,,,," << change_cells(lv.report.mean) << ",\n";
  }
  return s.str();
}

std::string bench_csv(const BenchTable& table) {
  std::ostringstream s;
  s << "instance,seed,pending_orders,scenario_orders,scenarios";
  for (int m = 0; m < kBenchMethodCount; ++m) {
    const std::string name = to_string(static_cast<BenchMethod>(m));
    s << ',' << name << "_objective," << name << "_gap_pct," << name << "_time_ms," << name << "_status";
  }
  s << '\n';
  for (const BenchRow& r : table.rows) {
    s << r.index << ',' << r.seed << ',' << r.shape.pending_orders << ',' << r.shape.scenario_orders << ','
      << r.shape.scenarios;
    for (const BenchCell& c : r.cells) {
      if (c.ok)
        s << ',' << num(c.objective) << ',' << num(c.gap_pct) << ',' << num(c.wall_time_ms) << ",ok";
      else
        s << ",NA,NA," << num(c.wall_time_ms) << ',' << cell_text(c.error);
    }
    s << '\n';
  }
  const char* labels[] = {"mean", "sd", "max"};
  for (int k = 0; k < 3; ++k) {
    s << labels[k] << ",,,,";
    for (int m = 0; m < kBenchMethodCount; ++m) {
      const BenchSummary& g = table.gap[m];
      const BenchSummary& t = table.time_ms[m];
      auto pick = [&](const BenchSummary& b) {
        if (b.count == 0) return std::string("NA");
        return num(k == 0 ? b.mean : k == 1 ? b.sd : b.max);
      };
      s << ",," << pick(g) << ',' << pick(t) << ',' << g.count;
    }
    s << '\n';
  }
  return s.str();
}

Json simulate_plot_document(const SimulateOutcome& out, const SimulateRequest& request) {
  Json j = header(kPlotSchema);
  j["kind"] = "simulate";
  j["config"] = simulate_body(request);
  auto cycle_totals = [](const SimulationRun& r) {
    Json a = Json::array();
    for (const CycleLedger& c : r.cycles) a.push_back(c.cost.total());
    return a;
  };
  Json series = Json::array();
  for (std::size_t i = 0; i < out.report.pairs.size(); ++i) {
    const PairComparison& p = out.report.pairs[i];
    series.push_back({{"replication", i},
                      {"seed", p.seed},
                      {"single_stage", to_json(p.a)},
                      {"two_stage", to_json(p.b)},
                      {"single_stage_dispatches", p.dispatches_a},
                      {"two_stage_dispatches", p.dispatches_b},
                      {"single_stage_cycle_totals", cycle_totals(out.single_stage[i])},
                      {"two_stage_cycle_totals", cycle_totals(out.two_stage[i])},
                      {"change_pct", change_json(p.change)},
                      {"mechanism", to_string(p.mechanism)}});
  }
  j["series"] = series;
  j["mean_change_pct"] = change_json(out.report.mean);
  j["sd_change_pct"] = change_json(out.report.sd);
  j["trip_reduction_events"] = out.report.trip_reduction_events;
  j["trip_saving_events"] = out.report.trip_saving_events;
  return j;
}

Json sensitivity_plot_document(const SensitivityReport& report, const SensitivityRequest& request) {
  Json j = header(kPlotSchema);
  j["kind"] = "sensitivity";
  Json config = simulate_body(request.base);
  config["axis"] = to_string(request.axis);
  config["levels"] = request.levels;
  j["config"] = config;
  j["axis"] = to_string(report.axis);
  Json series = Json::array();
  Json levels = Json::array();
  for (const SensitivityLevel& lv : report.levels) {
    for (std::size_t i = 0; i < lv.report.pairs.size(); ++i) {
      const PairComparison& p = lv.report.pairs[i];
      series.push_back({{"level", lv.level},
                        {"replication", i},
                        {"seed", p.seed},
                        {"single_stage_total", p.a.total()},
                        {"two_stage_total", p.b.total()},
                        {"change_pct", change_json(p.change)}});
    }
    levels.push_back(
        {{"level", lv.level}, {"mean_change_pct", change_json(lv.report.mean)}, {"sd_change_pct", change_json(lv.report.sd)}});
  }
  j["series"] = series;
  j["levels"] = levels;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream s;
  s << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return s.str();
}

void write_file_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into '" + path + "'");
  }
}

}  // namespace dof::io
