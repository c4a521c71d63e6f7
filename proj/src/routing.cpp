#include "dof/routing.hpp"

#include <algorithm>
#include <bit>

namespace dof {

RoutingContext::RoutingContext(std::vector<Stop> stops, const Fleet& fleet, const CostParams& params)
    : stops_(std::move(stops)), fleet_(fleet), params_(params) {
  nodes_ = static_cast<int>(stops_.size()) + 1;
  dist_.assign(static_cast<std::size_t>(nodes_) * nodes_, 0.0);
  auto at = [&](int node) { return node == 0 ? fleet_.depot : stops_[node - 1].at; };
  for (int a = 0; a < nodes_; ++a)
    for (int b = 0; b < nodes_; ++b) dist_[a * nodes_ + b] = distance(at(a), at(b));
}

double RoutingContext::leg_kwh(int node_a, int node_b, double load) const {
  const VehicleSpec& s = fleet_.spec;
  return (s.energy_base + s.energy_per_kg * load) * dist(node_a, node_b) / s.cruise_speed;
}

double RoutingContext::leg_cost(int node_a, int node_b, double load) const {
  return params_.beta * dist(node_a, node_b) + params_.gamma * leg_kwh(node_a, node_b, load);
}

RoutingContext::Eval RoutingContext::evaluate(std::span<const int> seq) const {
  Eval e;
  for (int s : seq) e.payload += stops_[s].weight;
  e.capacity_ok = e.payload <= fleet_.spec.load_capacity + kLedgerTol;
  double load = e.payload;
  int at = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const int next = seq[i] + 1;
    e.miles += dist(at, next);
    e.kwh += leg_kwh(at, next, load);
    load = i + 1 == seq.size() ? 0.0 : load - stops_[seq[i]].weight;
    at = next;
  }
  if (!seq.empty()) {
    e.miles += dist(at, 0);
    e.kwh += leg_kwh(at, 0, 0.0);
  }
  e.travel = params_.beta * e.miles + params_.gamma * e.kwh;
  e.battery_ok = e.kwh <= fleet_.spec.battery_capacity + kLedgerTol;
  return e;
}

double RoutingContext::route_cost(std::span<const int> seq) const {
  if (seq.empty()) return 0.0;
  const Eval e = evaluate(seq);
  return e.feasible() ? e.travel + params_.kappa : kInf;
}

namespace {

struct Label {
  double cost;
  double kwh;
  int parent;  // index into the label pool, -1 at the depot
  int last;    // position within the subset
};

}  // namespace

std::optional<Sequence> best_sequence(const RoutingContext& ctx, std::span<const int> subset) {
  const int m = static_cast<int>(subset.size());
  if (m == 0) return Sequence{};
  if (m > 20) throw SizeLimitError("best_sequence supports at most 20 stops");
  const VehicleSpec& spec = ctx.fleet().spec;
  const double battery = spec.battery_capacity + kLedgerTol;

  std::vector<double> wmask(std::size_t{1} << m, 0.0);
  for (Mask s = 1; s < wmask.size(); ++s) {
    const int low = std::countr_zero(s);
    wmask[s] = wmask[s & (s - 1)] + ctx.stop(subset[low]).weight;
  }
  const Mask full = static_cast<Mask>(wmask.size() - 1);
  const double total = wmask[full];
  if (total > spec.load_capacity + kLedgerTol) return std::nullopt;

  std::vector<Label> pool;
  // Per (mask, last) list of Pareto-optimal label indices.
  std::vector<std::vector<int>> state(wmask.size() * m);
  auto push = [&](Mask mask, int last, Label lab) {
    auto& list = state[static_cast<std::size_t>(mask) * m + last];
    for (int idx : list) {
      const Label& o = pool[idx];
      if (o.cost <= lab.cost + 1e-12 && o.kwh <= lab.kwh + 1e-12) return;
    }
    std::erase_if(list, [&](int idx) {
      return lab.cost <= pool[idx].cost && lab.kwh <= pool[idx].kwh;
    });
    list.push_back(static_cast<int>(pool.size()));
    pool.push_back(lab);
  };

  for (int j = 0; j < m; ++j) {
    const int node = subset[j] + 1;
    const double kwh = ctx.leg_kwh(0, node, total);
    if (kwh > battery) continue;
    push(Mask{1} << j, j, Label{ctx.leg_cost(0, node, total), kwh, -1, j});
  }
  for (Mask mask = 1; mask < full; ++mask) {
    const double load = total - wmask[mask];
    for (int last = 0; last < m; ++last) {
      if (!(mask >> last & 1)) continue;
      const auto labels = state[static_cast<std::size_t>(mask) * m + last];
      for (int idx : labels) {
        const Label lab = pool[idx];
        for (int j = 0; j < m; ++j) {
          if (mask >> j & 1) continue;
          const int a = subset[last] + 1, b = subset[j] + 1;
          const double kwh = lab.kwh + ctx.leg_kwh(a, b, load);
          if (kwh > battery) continue;
          push(mask | (Mask{1} << j), j, Label{lab.cost + ctx.leg_cost(a, b, load), kwh, idx, j});
        }
      }
    }
  }

  int best = -1;
  double best_cost = kInf;
  for (int last = 0; last < m; ++last) {
    for (int idx : state[static_cast<std::size_t>(full) * m + last]) {
      const Label& lab = pool[idx];
      const int a = subset[last] + 1;
      const double kwh = lab.kwh + ctx.leg_kwh(a, 0, 0.0);
      if (kwh > battery) continue;
      const double cost = lab.cost + ctx.leg_cost(a, 0, 0.0);
      if (cost < best_cost - 1e-12) {
        best_cost = cost;
        best = idx;
      }
    }
  }
  if (best < 0) return std::nullopt;
  Sequence seq;
  for (int idx = best; idx >= 0; idx = pool[idx].parent) seq.order.push_back(subset[pool[idx].last]);
  std::reverse(seq.order.begin(), seq.order.end());
  seq.travel = ctx.evaluate(seq.order).travel;
  return seq;
}

SubsetRoutes::SubsetRoutes(const RoutingContext& ctx, int max_routes)
    : ctx_(ctx), n_(ctx.size()), max_routes_(max_routes) {
  if (n_ > kMaxStops) throw SizeLimitError("subset tables support at most 16 stops");
  if (max_routes_ < 0) throw ConfigError("max_routes must be non-negative");
  build_routes();
  build_partitions();
}

void SubsetRoutes::build_routes() {
  const std::size_t masks = std::size_t{1} << n_;
  const double cap = ctx_.fleet().spec.load_capacity + kLedgerTol;
  const double battery = ctx_.fleet().spec.battery_capacity + kLedgerTol;
  const double kappa = ctx_.params().kappa;
  weight_.assign(masks, 0.0);
  for (Mask s = 1; s < masks; ++s)
    weight_[s] = weight_[s & (s - 1)] + ctx_.stop(std::countr_zero(s)).weight;

  route_.assign(masks, kInf);
  first_.assign(masks, -1);
  route_[0] = 0.0;
  if (n_ == 0) return;
  tail_.assign(masks * n_, kInf);
  tail_next_.assign(masks * n_, -1);

  for (Mask s = 0; s < masks; ++s) {
    if (weight_[s] > cap) continue;
    const double load = weight_[s];
    for (int i = 0; i < n_; ++i) {
      if (s >> i & 1) continue;
      if (weight_[s] + ctx_.stop(i).weight > cap) continue;
      double best = kInf;
      int arg = -1;
      if (s == 0) {
        best = ctx_.leg_cost(i + 1, 0, 0.0);
      } else {
        for (Mask rest = s; rest; rest &= rest - 1) {
          const int j = std::countr_zero(rest);
          const double c = ctx_.leg_cost(i + 1, j + 1, load) + tail_[(s ^ (Mask{1} << j)) * n_ + j];
          if (c < best) {
            best = c;
            arg = j;
          }
        }
      }
      tail_[s * n_ + i] = best;
      tail_next_[s * n_ + i] = static_cast<std::int8_t>(arg);
    }
  }

  for (Mask r = 1; r < masks; ++r) {
    if (weight_[r] > cap) continue;
    double best = kInf;
    int arg = -1;
    for (Mask rest = r; rest; rest &= rest - 1) {
      const int j = std::countr_zero(rest);
      const double c = ctx_.leg_cost(0, j + 1, weight_[r]) + tail_[(r ^ (Mask{1} << j)) * n_ + j];
      if (c < best) {
        best = c;
        arg = j;
      }
    }
    first_[r] = arg;
    const std::vector<int> seq = route_sequence(r);
    const RoutingContext::Eval e = ctx_.evaluate(seq);
    if (e.kwh <= battery) {
      route_[r] = e.travel + kappa;
      continue;
    }
    // The cheapest ordering drains the battery; search for the best feasible one.
    std::vector<int> subset;
    for (Mask rest = r; rest; rest &= rest - 1) subset.push_back(std::countr_zero(rest));
    if (auto alt = best_sequence(ctx_, subset)) {
      route_[r] = alt->travel + kappa;
      fallback_mask_.push_back(r);
      fallback_seq_.push_back(alt->order);
    }
  }
}

std::vector<int> SubsetRoutes::route_sequence(Mask mask) const {
  std::vector<int> seq;
  if (mask == 0) return seq;
  for (std::size_t i = 0; i < fallback_mask_.size(); ++i)
    if (fallback_mask_[i] == mask) return fallback_seq_[i];
  int cur = first_[mask];
  Mask rest = mask;
  while (cur >= 0) {
    seq.push_back(cur);
    rest ^= Mask{1} << cur;
    cur = rest ? tail_next_[rest * n_ + cur] : -1;
  }
  return seq;
}

void SubsetRoutes::build_partitions() {
  const std::size_t masks = std::size_t{1} << n_;
  std::vector<std::vector<Mask>> by_low(n_);
  for (Mask r = 1; r < masks; ++r)
    if (route_[r] < kInf) by_low[std::countr_zero(r)].push_back(r);

  level_.assign(max_routes_ + 1, std::vector<double>(masks, kInf));
  level_choice_.assign(max_routes_ + 1, std::vector<Mask>(masks, 0));
  level_[0][0] = 0.0;
  for (int k = 1; k <= max_routes_; ++k) {
    const auto& prev = level_[k - 1];
    auto& cur = level_[k];
    auto& choice = level_choice_[k];
    cur = prev;
    for (Mask s = 1; s < masks; ++s) {
      for (Mask r : by_low[std::countr_zero(s)]) {
        if (r & ~s) continue;
        const double c = route_[r] + prev[s ^ r];
        if (c < cur[s] - 1e-12) {
          cur[s] = c;
          choice[s] = r;
        }
      }
    }
  }
  part_ = level_[max_routes_];
}

std::vector<Mask> SubsetRoutes::partition(Mask mask) const {
  std::vector<Mask> routes;
  if (part_[mask] == kInf) return routes;
  int k = max_routes_;
  Mask s = mask;
  while (s && k > 0) {
    const Mask r = level_choice_[k][s];
    --k;
    if (r == 0) continue;
    routes.push_back(r);
    s ^= r;
  }
  return routes;
}

}  // namespace dof
