#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "dof/error.hpp"
#include "dof/io.hpp"

using namespace dof;
using io::Json;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream s(text);
  for (std::string line; std::getline(s, line);) out.push_back(line);
  return out;
}

std::size_t columns(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

void check_rectangular(const std::string& csv) {
  const auto rows = lines(csv);
  REQUIRE(rows.size() >= 2);
  for (const std::string& r : rows) CHECK(columns(r) == columns(rows.front()));
}

SimulateRequest small_simulation() {
  SimulateRequest r;
  r.sim.cycles = 3;
  r.two_stage.scenario_count = 3;
  r.replications = 2;
  r.seed = 5;
  return r;
}

}  // namespace

TEST_CASE("instance document round-trips exactly") {
  const Instance in = generate_instance({4, 3, 3, 1}, 77);
  const Json doc = io::instance_document(in);
  const Instance back = io::instance_from_document(io::parse(io::dump(doc)));
  CHECK(io::dump(io::instance_document(back)) == io::dump(doc));
  REQUIRE(back.pending.size() == in.pending.size());
  for (std::size_t i = 0; i < in.pending.size(); ++i) {
    CHECK(back.pending[i].weight == in.pending[i].weight);
    CHECK(back.pending[i].destination == in.pending[i].destination);
  }
  CHECK(back.params.penalty_rate == in.params.penalty_rate);
  CHECK(back.scenarios.size() == 3);
}

TEST_CASE("config documents round-trip") {
  GenRequest g;
  g.shape = {5, 5, 10, 1};
  g.seed = 9;
  CHECK(io::dump(io::gen_document(io::gen_from_document(io::gen_document(g)))) == io::dump(io::gen_document(g)));

  SolveRequest s;
  s.method = SolveMethod::kExact;
  s.solver.nu = 0.6;
  s.solver.recourse.budget.max_iterations = 12;
  const SolveRequest s2 = io::solve_from_document(io::solve_document(s));
  CHECK(s2.method == SolveMethod::kExact);
  CHECK(s2.solver.nu == 0.6);
  CHECK(s2.solver.recourse.budget.max_iterations == 12);

  BenchConfig b;
  b.instances = 3;
  CHECK(io::dump(io::bench_document(io::bench_from_document(io::bench_document(b)))) ==
        io::dump(io::bench_document(b)));

  const SimulateRequest sim = small_simulation();
  CHECK(io::dump(io::simulate_document(io::simulate_from_document(io::simulate_document(sim)))) ==
        io::dump(io::simulate_document(sim)));

  SensitivityRequest sens;
  sens.base = sim;
  sens.axis = SensitivityAxis::kWeightRange;
  sens.levels = {0.5, 2.5};
  const SensitivityRequest sens2 = io::sensitivity_from_document(io::sensitivity_document(sens));
  CHECK(sens2.axis == SensitivityAxis::kWeightRange);
  CHECK(sens2.levels == sens.levels);
}

TEST_CASE("partial documents take defaults") {
  const SolveRequest s = io::solve_from_document(io::parse(R"({"schema":"dof.solve_config","version":1})"));
  CHECK(s.method == SolveMethod::kTwoTier);
  CHECK(s.solver.nu == 0.8);
  const SimulateRequest r =
      io::simulate_from_document(io::parse(R"({"schema":"dof.simulate_config","version":1,"cycles":4})"));
  CHECK(r.sim.cycles == 4);
  CHECK(r.replications == 10);
}

TEST_CASE("unknown fields are rejected at every depth") {
  CHECK_THROWS_AS(io::solve_from_document(io::parse(R"({"schema":"dof.solve_config","version":1,"nuu":0.5})")),
                  ConfigError);
  CHECK_THROWS_AS(
      io::solve_from_document(io::parse(R"({"schema":"dof.solve_config","version":1,"solver":{"recourse":{"x":1}}})")),
      ConfigError);
  Json doc = io::instance_document(generate_instance({2, 2, 2, 1}, 3));
  doc["pending"][0]["colour"] = "red";
  CHECK_THROWS_AS(io::instance_from_document(doc), ConfigError);
  Json sim = io::simulate_document(small_simulation());
  sim["profile"]["clusters"][0]["mean"] = 1;
  CHECK_THROWS_AS(io::simulate_from_document(sim), ConfigError);
  // A solve document carries its mode at the top level only.
  CHECK_THROWS_AS(
      io::solve_from_document(io::parse(R"({"schema":"dof.solve_config","version":1,"solver":{"mode":"exact"}})")),
      ConfigError);
}

TEST_CASE("type mismatches are hard errors") {
  auto solve = [](const std::string& body) {
    return io::solve_from_document(io::parse(R"({"schema":"dof.solve_config","version":1,)" + body + "}"));
  };
  CHECK_THROWS_AS(solve(R"("myopic_cap":1.5)"), ConfigError);
  CHECK_THROWS_AS(solve(R"("myopic_cap":"3")"), ConfigError);
  CHECK_THROWS_AS(solve(R"("solver":{"nu":"high"})"), ConfigError);
  CHECK_THROWS_AS(solve(R"("parallel":true)"), ConfigError);
  CHECK_THROWS_AS(solve(R"("mode":"fastest")"), ConfigError);
  CHECK_THROWS_AS(solve(R"("solver":{"nu":1.5})"), ConfigError);
  CHECK_NOTHROW(solve(R"("solver":{"nu":1})"));
  Json doc = io::instance_document(generate_instance({2, 2, 2, 1}, 3));
  doc["seed"] = -1;
  CHECK_THROWS_AS(io::instance_from_document(doc), ConfigError);
}

TEST_CASE("schema and version are checked") {
  CHECK_THROWS_AS(io::solve_from_document(io::parse(R"({"schema":"dof.bench_config","version":1})")), ConfigError);
  CHECK_THROWS_AS(io::solve_from_document(io::parse(R"({"schema":"dof.solve_config","version":2})")), ConfigError);
  CHECK_THROWS_AS(io::solve_from_document(io::parse(R"({"version":1})")), ConfigError);
  CHECK_THROWS_AS(io::solve_from_document(io::parse(R"([1,2])")), ConfigError);
  CHECK_THROWS_AS(io::parse("{not json"), ConfigError);
}

TEST_CASE("instance documents are validated") {
  const Json good = io::instance_document(generate_instance({3, 2, 2, 1}, 4));
  Json dup = good;
  dup["pending"][1]["id"] = dup["pending"][0]["id"];
  CHECK_THROWS_AS(io::instance_from_document(dup), ConfigError);
  Json heavy = good;
  heavy["pending"][0]["weight"] = 0.0;
  CHECK_THROWS_AS(io::instance_from_document(heavy), ConfigError);
  Json late = good;
  late["pending"][0]["arrival_cycle"] = 3;
  CHECK_THROWS_AS(io::instance_from_document(late), ConfigError);
  Json ragged = good;
  ragged["scenarios"][0]["orders"].erase(0);
  CHECK_THROWS_AS(io::instance_from_document(ragged), ConfigError);
  Json missing = good;
  missing.erase("pending");
  CHECK_THROWS_AS(io::instance_from_document(missing), ConfigError);
  Json params = good;
  params["params"]["horizon_T"] = 0;
  CHECK_THROWS_AS(io::instance_from_document(params), ConfigError);
}

TEST_CASE("exact and oracle solves agree on a tiny instance") {
  const Instance in = generate_instance({3, 3, 3, 1}, 21);
  SolveRequest exact;
  exact.method = SolveMethod::kExact;
  SolveRequest oracle;
  oracle.method = SolveMethod::kOracle;
  const SolveOutcome a = solve_instance(in, exact);
  const SolveOutcome b = solve_instance(in, oracle);
  CHECK(std::abs(a.objective - b.objective) <= 1e-6);
  CHECK(a.objective == doctest::Approx(a.first_stage.total() + a.recourse).epsilon(1e-12));
  CHECK(b.objective == doctest::Approx(b.first_stage.total() + b.recourse).epsilon(1e-12));
  CHECK(b.per_scenario_recourse.size() == 3);
}

TEST_CASE("result documents carry mode statistics and the config, without timings") {
  const Instance in = generate_instance({3, 3, 3, 1}, 22);
  SolveRequest req;
  const SolveOutcome out = solve_instance(in, req);
  const Json doc = io::result_document(out, req, in);
  CHECK(doc["schema"] == io::kResultSchema);
  CHECK(doc["objective"].get<double>() == out.objective);
  CHECK(doc["stats"].contains("nodes_created"));
  CHECK(doc["stats"].contains("greedy_cuts"));
  CHECK(doc["config"]["mode"] == "two_tier");
  CHECK(io::dump(doc).find("wall_time_ms") == std::string::npos);
  CHECK(doc["y0"].size() == in.pending.size());

  SolveRequest myopic;
  myopic.method = SolveMethod::kMyopic;
  const Json m = io::result_document(solve_instance(in, myopic), myopic, in);
  CHECK_FALSE(m.contains("stats"));
}

TEST_CASE("scenario limit uses the leading scenarios") {
  const Instance in = generate_instance({3, 3, 4, 1}, 23);
  SolveRequest req;
  req.method = SolveMethod::kOracle;
  req.scenario_limit = 2;
  Instance cut = in;
  cut.scenarios.resize(2);
  SolveRequest all;
  all.method = SolveMethod::kOracle;
  CHECK(solve_instance(in, req).objective == solve_instance(cut, all).objective);
  req.scenario_limit = 5;
  CHECK_THROWS_AS(solve_instance(in, req), ConfigError);
}

TEST_CASE("solve size caps surface as size-limit errors") {
  const Instance in = generate_instance({7, 2, 2, 1}, 24);
  SolveRequest oracle;
  oracle.method = SolveMethod::kOracle;
  CHECK_THROWS_AS(solve_instance(in, oracle), SizeLimitError);
  SolveRequest tight;
  tight.solver.master_cap = 3;
  CHECK_THROWS_AS(solve_instance(in, tight), SizeLimitError);
}

TEST_CASE("bench table has per-method columns and footer rows") {
  BenchConfig c;
  c.instances = 2;
  c.pending_min = 2;
  c.pending_max = 3;
  c.scenario_orders_min = c.scenario_orders_max = 2;
  c.scenarios = 2;
  const BenchTable t = run_bench(c);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].shape.pending_orders == 2);
  CHECK(t.rows[1].shape.pending_orders == 3);
  for (const BenchRow& r : t.rows) {
    for (const BenchCell& cell : r.cells) CHECK(cell.ok);
    CHECK(r.cells[static_cast<int>(BenchMethod::kExact)].gap_pct == 0.0);
    CHECK(std::abs(r.cells[static_cast<int>(BenchMethod::kOracle)].gap_pct) < 1e-6);
  }
  const std::string csv = io::bench_csv(t);
  check_rectangular(csv);
  const auto rows = lines(csv);
  CHECK(rows.size() == 1 + 2 + 3);
  CHECK(rows[0].rfind("instance,seed,pending_orders", 0) == 0);
  CHECK(rows[0].find("two_tier_gap_pct") != std::string::npos);
  CHECK(rows[3].rfind("mean,", 0) == 0);
  CHECK(rows[5].rfind("max,", 0) == 0);
}

TEST_CASE("bench records per-cell failures") {
  BenchConfig c;
  c.instances = 1;
  c.pending_min = c.pending_max = 3;
  c.scenario_orders_min = c.scenario_orders_max = 2;
  c.scenarios = 2;
  c.oracle_caps.max_pending = 2;
  const BenchTable t = run_bench(c);
  const BenchCell& o = t.rows[0].cells[static_cast<int>(BenchMethod::kOracle)];
  CHECK_FALSE(o.ok);
  CHECK_FALSE(o.error.empty());
  CHECK(std::isnan(o.gap_pct));
  CHECK(t.gap[static_cast<int>(BenchMethod::kOracle)].count == 0);
  check_rectangular(io::bench_csv(t));
}

TEST_CASE("simulation outputs are rectangular and sized by replications") {
  const SimulateRequest req = small_simulation();
  const SimulateOutcome out = run_simulation(req);
  const std::string ledger = io::ledger_csv(out);
  check_rectangular(ledger);
  // Header plus cycles and one terminal row per run, for both policies.
  CHECK(lines(ledger).size() == 1 + 2 * req.replications * (req.sim.cycles + 1));
  const std::string cmp = io::comparison_csv(out.report);
  check_rectangular(cmp);
  CHECK(lines(cmp).size() == 1 + req.replications + 2);
  const Json plot = io::simulate_plot_document(out, req);
  CHECK(plot["series"].size() == static_cast<std::size_t>(req.replications));
  CHECK(plot["series"][0]["two_stage_cycle_totals"].size() == static_cast<std::size_t>(req.sim.cycles));
  CHECK(plot["config"]["seed"] == req.seed);
}

TEST_CASE("sensitivity plot series cover levels times replications") {
  SensitivityRequest req;
  req.base = small_simulation();
  req.base.sim.cycles = 2;
  req.axis = SensitivityAxis::kLocationSd;
  req.levels = {0.1, 0.3, 0.5};
  const SensitivityReport rep = run_sensitivity(req);
  const Json plot = io::sensitivity_plot_document(rep, req);
  CHECK(plot["series"].size() == req.levels.size() * static_cast<std::size_t>(req.base.replications));
  CHECK(plot["levels"].size() == req.levels.size());
  const std::string csv = io::sensitivity_csv(rep);
  check_rectangular(csv);
  CHECK(lines(csv).size() == 1 + req.levels.size() * (req.base.replications + 1));
}

TEST_CASE("an empty profile simulates to zero ledgers") {
  SimulateRequest req = small_simulation();
  for (Cluster& c : req.sim.profile.clusters) {
    std::fill(c.arrival_means.begin(), c.arrival_means.end(), 0.0);
    c.arrival_sd = 0.0;
  }
  const SimulateOutcome out = run_simulation(req);
  for (const auto& runs : {out.single_stage, out.two_stage})
    for (const SimulationRun& r : runs) CHECK(r.totals.total() == 0.0);
  CHECK(out.report.mean.total == 0.0);
}

TEST_CASE("files are written atomically and read back") {
  const auto dir = std::filesystem::temp_directory_path() / "dof_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  io::write_file_atomic(path, "{\"a\":1}\n");
  CHECK(io::read_file(path) == "{\"a\":1}\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS_AS(io::read_file((dir / "missing.json").string()), IoError);
  CHECK_THROWS_AS(io::write_file_atomic((dir / "no" / "such" / "dir.json").string(), "x"), IoError);
  std::filesystem::remove_all(dir);
}
