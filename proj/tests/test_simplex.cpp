#include <cmath>
#include <random>
#include <functional>

#include "doctest.h"
#include "dof/error.hpp"
#include "dof/simplex.hpp"

using namespace dof;

namespace {

// Vertex enumeration: every choice of n tight constraints (rows or bounds) that
// yields a unique point is checked for feasibility; the best feasible one wins.
struct Halfspace {
  std::vector<double> a;
  double b;  // a . x <= b
};

bool solve_square(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
    if (std::abs(A[p][c]) < 1e-10) return false;
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0);
  for (int i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return true;
}

double vertex_enumeration(const LinearProgram& lp, bool* feasible) {
  const int n = lp.num_variables();
  std::vector<Halfspace> hs;
  for (const auto& row : lp.rows) {
    std::vector<double> a(n, 0.0);
    for (const auto& [j, v] : row.coefs) a[j] += v;
    if (row.sense != RowSense::kGreaterEqual) hs.push_back({a, row.rhs});
    if (row.sense != RowSense::kLessEqual) {
      for (double& v : a) v = -v;
      hs.push_back({a, -row.rhs});
    }
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> a(n, 0.0);
    a[j] = -1;
    hs.push_back({a, -lp.lower[j]});
    a[j] = 1;
    hs.push_back({a, lp.upper[j]});
  }
  const int h = static_cast<int>(hs.size());
  double best = std::numeric_limits<double>::infinity();
  *feasible = false;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      std::vector<std::vector<double>> A;
      std::vector<double> b;
      for (int k : pick) {
        A.push_back(hs[k].a);
        b.push_back(hs[k].b);
      }
      std::vector<double> x;
      if (!solve_square(A, b, x)) return;
      for (const Halfspace& s : hs) {
        double lhs = 0;
        for (int j = 0; j < n; ++j) lhs += s.a[j] * x[j];
        if (lhs > s.b + 1e-7) return;
      }
      *feasible = true;
      double obj = 0;
      for (int j = 0; j < n; ++j) obj += lp.cost[j] * x[j];
      best = std::min(best, obj);
      return;
    }
    for (int k = start; k < h; ++k) {
      pick[depth] = k;
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

void check_feasible(const LinearProgram& lp, const std::vector<double>& x) {
  for (int j = 0; j < lp.num_variables(); ++j) {
    CHECK(x[j] >= lp.lower[j] - 1e-7);
    CHECK(x[j] <= lp.upper[j] + 1e-7);
  }
  for (const auto& row : lp.rows) {
    double lhs = 0;
    for (const auto& [j, a] : row.coefs) lhs += a * x[j];
    if (row.sense == RowSense::kLessEqual) CHECK(lhs <= row.rhs + 1e-6);
    if (row.sense == RowSense::kGreaterEqual) CHECK(lhs >= row.rhs - 1e-6);
    if (row.sense == RowSense::kEqual) CHECK(std::abs(lhs - row.rhs) <= 1e-6);
  }
}

}  // namespace

TEST_CASE("textbook production LP") {
  LinearProgram lp;
  const int x = lp.add_variable(-3, 0, std::numeric_limits<double>::infinity());
  const int y = lp.add_variable(-5, 0, std::numeric_limits<double>::infinity());
  lp.add_row({{x, 1}}, RowSense::kLessEqual, 4);
  lp.add_row({{y, 2}}, RowSense::kLessEqual, 12);
  lp.add_row({{x, 3}, {y, 2}}, RowSense::kLessEqual, 18);
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(-36));
  CHECK(s.x[x] == doctest::Approx(2));
  CHECK(s.x[y] == doctest::Approx(6));
}

TEST_CASE("degenerate cycling example terminates at the optimum") {
  LinearProgram lp;
  const double inf = std::numeric_limits<double>::infinity();
  const int a = lp.add_variable(-0.75, 0, inf);
  const int b = lp.add_variable(20, 0, inf);
  const int c = lp.add_variable(-0.5, 0, inf);
  const int d = lp.add_variable(6, 0, inf);
  lp.add_row({{a, 0.25}, {b, -8}, {c, -1}, {d, 9}}, RowSense::kLessEqual, 0);
  lp.add_row({{a, 0.5}, {b, -12}, {c, -0.5}, {d, 3}}, RowSense::kLessEqual, 0);
  lp.add_row({{c, 1}}, RowSense::kLessEqual, 1);
  LpOptions opt;
  opt.degenerate_switch = 0;  // Bland from the start
  const LpSolution s = solve_lp(lp, opt);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(-1.25));
  const LpSolution dantzig = solve_lp(lp);
  REQUIRE(dantzig.status == LpStatus::kOptimal);
  CHECK(dantzig.objective == doctest::Approx(-1.25));
}

TEST_CASE("infeasible, unbounded and bound-infeasible programs") {
  const double inf = std::numeric_limits<double>::infinity();
  LinearProgram lp;
  const int x = lp.add_variable(1, 0, inf);
  lp.add_row({{x, 1}}, RowSense::kGreaterEqual, 3);
  lp.add_row({{x, 1}}, RowSense::kLessEqual, 2);
  CHECK(solve_lp(lp).status == LpStatus::kInfeasible);

  LinearProgram un;
  const int y = un.add_variable(-1, 0, inf);
  const int z = un.add_variable(0, 0, inf);
  un.add_row({{y, 1}, {z, -1}}, RowSense::kLessEqual, 1);
  CHECK(solve_lp(un).status == LpStatus::kUnbounded);

  LinearProgram box;
  box.add_variable(1, 2, 1);
  CHECK(solve_lp(box).status == LpStatus::kInfeasible);

  LinearProgram neg;
  neg.add_variable(1, -inf, 0);
  CHECK_THROWS_AS(solve_lp(neg), ConfigError);
}

TEST_CASE("equality rows, shifted bounds and upper-bounded variables") {
  LinearProgram lp;
  const int a = lp.add_variable(1, -2, 3);
  const int b = lp.add_variable(-2, 1, 4);
  const int c = lp.add_variable(0.5, 0, 1);
  lp.add_row({{a, 1}, {b, 1}, {c, 1}}, RowSense::kEqual, 3);
  lp.add_row({{a, 1}, {b, -1}}, RowSense::kGreaterEqual, -5);
  const LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  bool feasible = false;
  CHECK(s.objective == doctest::Approx(vertex_enumeration(lp, &feasible)));
  CHECK(feasible);
  check_feasible(lp, s.x);
}

TEST_CASE("random bounded programs agree with vertex enumeration") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coef(-3, 3), rhs(-2, 6);
  std::uniform_int_distribution<int> sense(0, 2);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    LinearProgram lp;
    const int n = 2 + trial % 3;
    const int m = 1 + trial % 5;
    for (int j = 0; j < n; ++j) {
      const double lo = std::floor(coef(rng));
      lp.add_variable(coef(rng), lo, lo + 1 + std::abs(coef(rng)));
    }
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> row;
      for (int j = 0; j < n; ++j)
        if (rng() % 4 != 0) row.push_back({j, std::round(coef(rng) * 2) / 2});
      // Equalities only occasionally, to keep many instances feasible.
      int s = sense(rng);
      if (s == 2 && rng() % 3 != 0) s = 0;
      lp.add_row(row, static_cast<RowSense>(s), rhs(rng));
    }
    bool feasible = false;
    const double expected = vertex_enumeration(lp, &feasible);
    const LpSolution sol = solve_lp(lp);
    if (!feasible) {
      CHECK(sol.status == LpStatus::kInfeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(sol.status == LpStatus::kOptimal);
    ++optimal;
    CHECK(sol.objective == doctest::Approx(expected).epsilon(1e-7));
    check_feasible(lp, sol.x);
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 5);
}
