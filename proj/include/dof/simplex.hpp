// Dense-tableau bounded-variable primal simplex for small linear programs.
#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace dof {

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct LinearProgram {
  struct Row {
    std::vector<std::pair<int, double>> coefs;
    RowSense sense = RowSense::kLessEqual;
    double rhs = 0.0;
  };

  // Minimize cost . x subject to rows and lower <= x <= upper. Lower bounds must be
  // finite; upper bounds may be +infinity.
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int add_variable(double c, double lo, double hi);
  void add_row(std::vector<std::pair<int, double>> coefs, RowSense sense, double rhs);
  int num_variables() const { return static_cast<int>(cost.size()); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };
const char* to_string(LpStatus s);

struct LpOptions {
  double tolerance = 1e-7;
  int max_iterations = 50000;
  // Consecutive degenerate pivots after which pricing switches to Bland's rule.
  int degenerate_switch = 50;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace dof
