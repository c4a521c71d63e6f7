#include "dof/simplex.hpp"

#include <cmath>

#include "dof/error.hpp"

namespace dof {

int LinearProgram::add_variable(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return static_cast<int>(cost.size()) - 1;
}

void LinearProgram::add_row(std::vector<std::pair<int, double>> coefs, RowSense sense, double rhs) {
  rows.push_back(Row{std::move(coefs), sense, rhs});
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-13;

// Variables are shifted to x' = x - lower so every column lives in [0, ub].
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const LpOptions& opt) : opt_(opt) {
    const int n = lp.num_variables();
    m_ = static_cast<int>(lp.rows.size());
    structural_ = n;
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(lp.lower[j])) throw ConfigError("LP variables need finite lower bounds");
      if (lp.upper[j] < lp.lower[j] - opt.tolerance) infeasible_bounds_ = true;
      ub_.push_back(std::max(0.0, lp.upper[j] - lp.lower[j]));
      cost_.push_back(lp.cost[j]);
    }
    // Count slacks and artificials to size the tableau.
    std::vector<double> rhs(m_);
    std::vector<int> sign(m_, 1), slack_coef(m_, 0);
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp.rows[i];
      double b = row.rhs;
      for (const auto& [j, a] : row.coefs) b -= a * lp.lower[j];
      slack_coef[i] = row.sense == RowSense::kLessEqual ? 1 : row.sense == RowSense::kGreaterEqual ? -1 : 0;
      if (b < 0) sign[i] = -1;
      rhs[i] = std::abs(b);
    }
    int slacks = 0, artificials = 0;
    for (int i = 0; i < m_; ++i) {
      if (slack_coef[i] != 0) ++slacks;
      if (slack_coef[i] * sign[i] != 1) ++artificials;
    }
    cols_ = n + slacks + artificials;
    first_artificial_ = n + slacks;
    ub_.resize(cols_, kInfinity);
    cost_.resize(cols_, 0.0);
    t_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
    basis_.assign(m_, -1);
    beta_ = rhs;
    int next_slack = n, next_art = first_artificial_;
    for (int i = 0; i < m_; ++i) {
      double* r = row(i);
      for (const auto& [j, a] : lp.rows[i].coefs) r[j] += sign[i] * a;
      if (slack_coef[i] != 0) {
        const int s = next_slack++;
        r[s] = sign[i] * slack_coef[i];
        if (r[s] > 0) basis_[i] = s;
      }
      if (basis_[i] < 0) {
        const int a = next_art++;
        r[a] = 1.0;
        basis_[i] = a;
      }
    }
    at_upper_.assign(cols_, 0);
    is_basic_.assign(cols_, 0);
    for (int i = 0; i < m_; ++i) is_basic_[basis_[i]] = 1;
  }

  LpSolution solve() {
    LpSolution sol;
    if (infeasible_bounds_) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    if (first_artificial_ < cols_) {
      std::vector<double> phase1(cols_, 0.0);
      for (int j = first_artificial_; j < cols_; ++j) phase1[j] = 1.0;
      const LpStatus st = run(phase1, true);
      if (st == LpStatus::kIterationLimit) {
        sol.status = st;
        sol.iterations = iterations_;
        return sol;
      }
      double infeasibility = 0;
      for (int i = 0; i < m_; ++i)
        if (basis_[i] >= first_artificial_) infeasibility += beta_[i];
      if (infeasibility > 1e-6) {
        sol.status = LpStatus::kInfeasible;
        sol.iterations = iterations_;
        return sol;
      }
      for (int j = first_artificial_; j < cols_; ++j) ub_[j] = 0.0;
      for (int i = 0; i < m_; ++i)
        if (basis_[i] >= first_artificial_) beta_[i] = 0.0;
    }
    sol.status = run(cost_, false);
    sol.iterations = iterations_;
    if (sol.status != LpStatus::kOptimal) return sol;
    std::vector<double> value(cols_, 0.0);
    for (int j = 0; j < cols_; ++j)
      if (!is_basic_[j] && at_upper_[j]) value[j] = ub_[j];
    for (int i = 0; i < m_; ++i) value[basis_[i]] = beta_[i];
    sol.x.assign(value.begin(), value.begin() + structural_);
    return sol;
  }

 private:
  double* row(int i) { return t_.data() + static_cast<std::size_t>(i) * cols_; }

  LpStatus run(const std::vector<double>& c, bool phase1) {
    // Reduced costs d_j = c_j - c_B . T[:, j].
    d_.assign(c.begin(), c.end());
    for (int i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* r = row(i);
      for (int j = 0; j < cols_; ++j)
        if (r[j] != 0.0) d_[j] -= cb * r[j];
    }
    const double tol = opt_.tolerance;
    int degenerate = 0;
    std::vector<int> nz;
    for (;;) {
      const bool bland = degenerate >= opt_.degenerate_switch;
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < cols_; ++j) {
        if (is_basic_[j] || ub_[j] == 0.0) continue;
        if (!phase1 && j >= first_artificial_) continue;
        const double dj = d_[j];
        const double gain = at_upper_[j] ? dj : -dj;
        if (gain <= tol) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (gain > best) {
          best = gain;
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      if (iterations_ >= opt_.max_iterations) return LpStatus::kIterationLimit;
      ++iterations_;

      const double dir = at_upper_[enter] ? -1.0 : 1.0;
      double step = ub_[enter];
      int leave = -1;
      bool leave_to_upper = false;
      double leave_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double alpha = row(i)[enter] * dir;
        double bound;
        bool to_upper;
        if (alpha > kPivotTol) {
          bound = std::max(0.0, beta_[i]) / alpha;
          to_upper = false;
        } else if (alpha < -kPivotTol && ub_[basis_[i]] < kInfinity) {
          bound = std::max(0.0, ub_[basis_[i]] - beta_[i]) / -alpha;
          to_upper = true;
        } else {
          continue;
        }
        bool take = bound < step - 1e-12;
        if (!take && leave >= 0 && bound <= step + 1e-12) {
          take = bland ? basis_[i] < basis_[leave] : std::abs(alpha) > std::abs(leave_alpha);
        }
        if (take) {
          step = bound;
          leave = i;
          leave_to_upper = to_upper;
          leave_alpha = alpha;
        }
      }
      if (leave < 0 && step == kInfinity) return LpStatus::kUnbounded;
      degenerate = step <= tol ? degenerate + 1 : 0;

      for (int i = 0; i < m_; ++i) {
        const double a = row(i)[enter];
        if (a != 0.0) beta_[i] -= step * dir * a;
      }
      if (leave < 0) {
        at_upper_[enter] ^= 1;
        continue;
      }
      const int out = basis_[leave];
      beta_[leave] = at_upper_[enter] ? ub_[enter] - step : step;
      is_basic_[out] = 0;
      at_upper_[out] = leave_to_upper ? 1 : 0;
      is_basic_[enter] = 1;
      at_upper_[enter] = 0;
      basis_[leave] = enter;
      pivot(leave, enter, nz);
    }
  }

  void pivot(int r, int col, std::vector<int>& nz) {
    double* pr = row(r);
    const double inv = 1.0 / pr[col];
    nz.clear();
    for (int j = 0; j < cols_; ++j) {
      if (pr[j] == 0.0) continue;
      pr[j] *= inv;
      if (std::abs(pr[j]) < kDropTol) pr[j] = 0.0;
      else nz.push_back(j);
    }
    pr[col] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      const double f = ri[col];
      if (f == 0.0) continue;
      for (int j : nz) {
        double v = ri[j] - f * pr[j];
        ri[j] = std::abs(v) < kDropTol ? 0.0 : v;
      }
      ri[col] = 0.0;
    }
    const double f = d_[col];
    if (f != 0.0) {
      for (int j : nz) d_[j] -= f * pr[j];
      d_[col] = 0.0;
    }
  }

  LpOptions opt_;
  int m_ = 0;
  int cols_ = 0;
  int structural_ = 0;
  int first_artificial_ = 0;
  bool infeasible_bounds_ = false;
  std::vector<double> t_;
  std::vector<double> ub_, cost_, beta_, d_;
  std::vector<int> basis_;
  std::vector<char> at_upper_, is_basic_;
  int iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  if (lp.lower.size() != lp.cost.size() || lp.upper.size() != lp.cost.size())
    throw ConfigError("LP bound vectors must match the number of variables");
  Tableau tableau(lp, options);
  LpSolution sol = tableau.solve();
  if (sol.status == LpStatus::kOptimal) {
    sol.objective = 0.0;
    for (int j = 0; j < lp.num_variables(); ++j) {
      sol.x[j] += lp.lower[j];
      sol.objective += lp.cost[j] * sol.x[j];
    }
  }
  return sol;
}

}  // namespace dof
