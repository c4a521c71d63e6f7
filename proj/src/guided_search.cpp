// Guided local search over vehicle-copy assignments: relocate, exchange and 2-opt
// moves (relocation covers cycle reassignment and drop/undrop), with arc penalties
// added at each local optimum.
#include <algorithm>
#include <chrono>

#include "dof/subproblem.hpp"

namespace dof {
namespace {

class GuidedSearch {
 public:
  GuidedSearch(const SubproblemInstance& inst, const RoutingContext& ctx, const GuidedSearchParams& gls)
      : inst_(inst), ctx_(ctx), gls_(gls), n_(static_cast<int>(inst.orders.size())),
        K_(inst.fleet.size), V_(inst.fleet.size * inst.horizon()), nodes_(n_ + 1),
        penalty_(static_cast<std::size_t>(nodes_) * nodes_, 0) {}

  CopyAssignment run(const CopyAssignment& start, const SearchBudget& budget, int* iterations) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    load(start);
    const double start_cost = true_total();
    CopyAssignment best = start;
    double best_cost = start_cost;
    int rounds = 0;
    for (;;) {
      local_search(best, best_cost);
      if (rounds >= budget.max_iterations) break;
      if (budget.wall_time_s > 0 &&
          std::chrono::duration<double>(Clock::now() - t0).count() >= budget.wall_time_s)
        break;
      if (!penalize()) break;
      ++rounds;
    }
    if (iterations) *iterations = rounds;

    // Final per-route sequencing of the best assignment.
    CopyAssignment polished = best;
    for (auto& r : polished.routes)
      if (r.size() > 1 && r.size() <= 12)
        if (auto s = best_sequence(ctx_, r)) r = s->order;
    const double polished_cost = assignment_cost(inst_, ctx_, polished);
    if (polished_cost < best_cost - 1e-12) {
      best = polished;
      best_cost = polished_cost;
    }
    return best_cost < start_cost - 1e-9 ? best : start;
  }

 private:
  int cycle_of(int v) const { return v / K_ + 1; }

  double placement(int i, int v) const {
    if (v < 0) return inst_.orders[i].drop_cost;
    return inst_.orders[i].serve_cost[cycle_of(v) - 1];
  }

  double arc_penalty(std::span<const int> seq) const {
    if (seq.empty() || lambda_ == 0) return 0.0;
    long count = penalty_[seq.front() + 1];
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) count += penalty_[(seq[i] + 1) * nodes_ + seq[i + 1] + 1];
    count += penalty_[(seq.back() + 1) * nodes_];
    return lambda_ * static_cast<double>(count);
  }

  // Route cost under the augmented objective; kInf when infeasible.
  double augmented(std::span<const int> seq) const {
    const double c = ctx_.route_cost(seq);
    return c == kInf ? kInf : c + arc_penalty(seq);
  }

  void load(const CopyAssignment& a) {
    routes_ = a.routes;
    routes_.resize(V_);
    where_.assign(n_, -1);
    for (int v = 0; v < V_; ++v)
      for (int i : routes_[v]) where_[i] = v;
    aug_.assign(V_, 0.0);
    for (int v = 0; v < V_; ++v) aug_[v] = augmented(routes_[v]);
  }

  double true_total() const {
    CopyAssignment a{routes_};
    return assignment_cost(inst_, ctx_, a);
  }

  struct Move {
    int kind = -1;  // 0 relocate, 1 exchange, 2 two-opt
    int i = -1, j = -1, v = -1, pos = -1, a = -1, b = -1;
    double delta = 0.0;
  };

  void local_search(CopyAssignment& best, double& best_cost) {
    for (;;) {
      Move m = best_move();
      if (m.kind < 0 || m.delta > -1e-9) return;
      apply(m);
      const double cost = true_total();
      if (cost < best_cost - 1e-12) {
        best_cost = cost;
        best.routes = routes_;
      }
    }
  }

  Move best_move() {
    Move best;
    best.delta = -1e-9;
    std::vector<int> a_new, b_new;

    // Relocate (including drop and undrop).
    for (int i = 0; i < n_; ++i) {
      const int from = where_[i];
      double removed_gain = 0.0;
      if (from >= 0) {
        a_new = routes_[from];
        a_new.erase(std::find(a_new.begin(), a_new.end(), i));
        removed_gain = aug_[from] - augmented(a_new);
        if (removed_gain == -kInf || removed_gain != removed_gain) continue;
      }
      const double base = placement(i, from);
      if (from >= 0) {
        const double d = inst_.orders[i].drop_cost - base - removed_gain;
        if (d < best.delta) best = Move{0, i, -1, -1, 0, -1, -1, d};
      }
      for (int v = 0; v < V_; ++v) {
        if (inst_.orders[i].earliest > cycle_of(v)) continue;
        const std::vector<int>& target = v == from ? a_new : routes_[v];
        const double target_before = v == from ? aug_[from] - removed_gain : aug_[v];
        const double place = placement(i, v) - base;
        for (std::size_t p = 0; p <= target.size(); ++p) {
          b_new = target;
          b_new.insert(b_new.begin() + static_cast<std::ptrdiff_t>(p), i);
          const double after = augmented(b_new);
          if (after == kInf) continue;
          const double d = (after - target_before) - (from >= 0 && v != from ? removed_gain : 0.0) -
                           (v == from ? removed_gain : 0.0) + place;
          if (d < best.delta) best = Move{0, i, -1, v, static_cast<int>(p), -1, -1, d};
        }
      }
    }

    // Exchange between different routes or with a dropped order.
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        const int vi = where_[i], vj = where_[j];
        if (vi == vj) continue;
        if (vi >= 0 && inst_.orders[j].earliest > cycle_of(vi)) continue;
        if (vj >= 0 && inst_.orders[i].earliest > cycle_of(vj)) continue;
        double d = placement(i, vj) + placement(j, vi) - placement(i, vi) - placement(j, vj);
        if (vi >= 0) {
          a_new = routes_[vi];
          *std::find(a_new.begin(), a_new.end(), i) = j;
          const double c = augmented(a_new);
          if (c == kInf) continue;
          d += c - aug_[vi];
        }
        if (vj >= 0) {
          b_new = routes_[vj];
          *std::find(b_new.begin(), b_new.end(), j) = i;
          const double c = augmented(b_new);
          if (c == kInf) continue;
          d += c - aug_[vj];
        }
        if (d < best.delta) best = Move{1, i, j, -1, -1, -1, -1, d};
      }
    }

    // 2-opt within a route.
    for (int v = 0; v < V_; ++v) {
      const auto& r = routes_[v];
      for (std::size_t a = 0; a + 1 < r.size(); ++a) {
        for (std::size_t b = a + 1; b < r.size(); ++b) {
          a_new = r;
          std::reverse(a_new.begin() + static_cast<std::ptrdiff_t>(a), a_new.begin() + static_cast<std::ptrdiff_t>(b) + 1);
          const double c = augmented(a_new);
          if (c == kInf) continue;
          const double d = c - aug_[v];
          if (d < best.delta) best = Move{2, -1, -1, v, -1, static_cast<int>(a), static_cast<int>(b), d};
        }
      }
    }
    if (best.kind < 0) best.delta = 0.0;
    return best;
  }

  void apply(const Move& m) {
    if (m.kind == 0) {
      const int from = where_[m.i];
      if (from >= 0) {
        auto& r = routes_[from];
        r.erase(std::find(r.begin(), r.end(), m.i));
      }
      if (m.v >= 0) {
        auto& r = routes_[m.v];
        r.insert(r.begin() + m.pos, m.i);
      }
      where_[m.i] = m.v;
      if (from >= 0) aug_[from] = augmented(routes_[from]);
      if (m.v >= 0) aug_[m.v] = augmented(routes_[m.v]);
    } else if (m.kind == 1) {
      const int vi = where_[m.i], vj = where_[m.j];
      if (vi >= 0) *std::find(routes_[vi].begin(), routes_[vi].end(), m.i) = m.j;
      if (vj >= 0) *std::find(routes_[vj].begin(), routes_[vj].end(), m.j) = m.i;
      where_[m.i] = vj;
      where_[m.j] = vi;
      if (vi >= 0) aug_[vi] = augmented(routes_[vi]);
      if (vj >= 0) aug_[vj] = augmented(routes_[vj]);
    } else {
      auto& r = routes_[m.v];
      std::reverse(r.begin() + m.a, r.begin() + m.b + 1);
      aug_[m.v] = augmented(r);
    }
  }

  // Penalizes the highest-utility arc of the current local optimum.
  bool penalize() {
    double travel = 0;
    int arcs = 0;
    double best_util = -1;
    int best_arc = -1;
    for (int v = 0; v < V_; ++v) {
      const auto& r = routes_[v];
      if (r.empty()) continue;
      travel += ctx_.evaluate(r).travel;
      auto consider = [&](int from, int to) {
        ++arcs;
        const int key = from * nodes_ + to;
        const double util = ctx_.dist(from, to) / (1.0 + penalty_[key]);
        if (util > best_util + 1e-12 || (util > best_util - 1e-12 && key < best_arc)) {
          best_util = util;
          best_arc = key;
        }
      };
      consider(0, r.front() + 1);
      for (std::size_t i = 0; i + 1 < r.size(); ++i) consider(r[i] + 1, r[i + 1] + 1);
      consider(r.back() + 1, 0);
    }
    if (best_arc < 0) return false;
    if (lambda_ == 0) lambda_ = gls_.lambda_factor * travel / arcs;
    ++penalty_[best_arc];
    for (int v = 0; v < V_; ++v) aug_[v] = augmented(routes_[v]);
    return true;
  }

  const SubproblemInstance& inst_;
  const RoutingContext& ctx_;
  GuidedSearchParams gls_;
  int n_, K_, V_, nodes_;
  std::vector<int> penalty_;
  double lambda_ = 0.0;
  std::vector<std::vector<int>> routes_;
  std::vector<int> where_;
  std::vector<double> aug_;
};

}  // namespace

CopyAssignment guided_search(const SubproblemInstance& inst, const RoutingContext& ctx, CopyAssignment start,
                             const SearchBudget& budget, const GuidedSearchParams& gls, int* iterations) {
  start.routes.resize(static_cast<std::size_t>(inst.vehicle_copies()));
  GuidedSearch search(inst, ctx, gls);
  return search.run(start, budget, iterations);
}

}  // namespace dof
