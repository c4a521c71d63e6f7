#include "dof/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace dof {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void CostParams::validate() const {
  if (alpha < 0 || beta < 0 || gamma < 0 || kappa < 0 || penalty_base < 0 || penalty_rate < 0)
    throw ConfigError("cost coefficients must be non-negative");
  if (horizon_T < 1) throw ConfigError("horizon_T must be at least 1");
  if (!(cycle_minutes > 0)) throw ConfigError("cycle_minutes must be positive");
}

void VehicleSpec::validate() const {
  if (!(load_capacity > 0)) throw ConfigError("load_capacity must be positive");
  if (!(battery_capacity > 0)) throw ConfigError("battery_capacity must be positive");
  if (energy_base < 0 || energy_per_kg < 0) throw ConfigError("energy rates must be non-negative");
  if (!(cruise_speed > 0)) throw ConfigError("cruise_speed must be positive");
}

void Fleet::validate() const {
  spec.validate();
  if (size < 1) throw ConfigError("fleet size must be at least 1");
}

OrderTable::OrderTable(std::span<const Order> orders) {
  orders_.reserve(orders.size());
  for (const Order& o : orders) add(o);
}

void OrderTable::add(const Order& order) {
  if (index_.count(order.id)) throw PlanInconsistency("duplicate order id " + std::to_string(order.id));
  index_.emplace(order.id, orders_.size());
  orders_.push_back(order);
}

const Order* OrderTable::find(OrderId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &orders_[it->second];
}

const Order& OrderTable::at(OrderId id) const {
  const Order* o = find(id);
  if (!o) throw PlanInconsistency("unknown order id " + std::to_string(id));
  return *o;
}

ItemizedCost& ItemizedCost::operator+=(const ItemizedCost& o) {
  delay += o.delay;
  distance += o.distance;
  energy += o.energy;
  dispatch += o.dispatch;
  return *this;
}

ItemizedCost operator+(ItemizedCost a, const ItemizedCost& b) { return a += b; }

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kCapacity: return "capacity";
    case ViolationKind::kBattery: return "battery";
    case ViolationKind::kLoadLedger: return "load_ledger";
    case ViolationKind::kChargeLedger: return "charge_ledger";
    case ViolationKind::kDuplicateStop: return "duplicate_stop";
    case ViolationKind::kUnknownOrder: return "unknown_order";
    case ViolationKind::kInvalidOrder: return "invalid_order";
    case ViolationKind::kShape: return "shape";
  }
  return "unknown";
}

RouteInfeasible::RouteInfeasible(Violation v)
    : Error(ErrorCode::kRouteInfeasible,
            std::string("route infeasible (") + to_string(v.kind) + ", leg " +
                std::to_string(v.leg) + "): " + v.message),
      violation_(std::move(v)) {}

double energy_rate(double load, const VehicleSpec& spec) {
  if (load < 0) throw DomainError("negative load");
  return spec.energy_base + spec.energy_per_kg * load;
}

double leg_energy(double load, double miles, const VehicleSpec& spec) {
  return energy_rate(load, spec) * miles / spec.cruise_speed;
}

double delay_penalty(const Order& order, int completed_cycle, const CostParams& params) {
  const int elapsed = completed_cycle - order.arrival_cycle;
  if (elapsed < 0) throw DomainError("order completed before its arrival cycle");
  const int flat_limit = params.horizon_T + 1;
  if (elapsed <= flat_limit) return static_cast<double>(elapsed);
  const double escalated =
      order.urgency * params.penalty_base * std::exp(params.penalty_rate * elapsed);
  return std::max(static_cast<double>(flat_limit), escalated);
}

double overflow_penalty(const Order& order, int epoch, const CostParams& params) {
  const int flat_limit = params.horizon_T + 1;
  const int elapsed = std::max(flat_limit + 2, epoch + flat_limit - order.arrival_cycle);
  const double escalated =
      order.urgency * params.penalty_base * std::exp(params.penalty_rate * elapsed);
  return std::max(static_cast<double>(flat_limit), escalated);
}

PenaltyCalibration fit_penalty_calibration(std::span<const double> minutes,
                                           std::span<const double> dollars, double alpha,
                                           double cycle_minutes) {
  if (minutes.size() != dollars.size() || minutes.size() < 2)
    throw ConfigError("calibration needs at least two (minutes, dollars) pairs");
  if (!(alpha > 0) || !(cycle_minutes > 0)) throw ConfigError("alpha and cycle_minutes must be positive");
  const double n = static_cast<double>(minutes.size());
  double mx = 0, my = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < minutes.size(); ++i) {
    if (!(dollars[i] > 0)) throw ConfigError("calibration dollars must be positive");
    xs.push_back(minutes[i] / cycle_minutes);
    ys.push_back(std::log(dollars[i] / alpha));
    mx += xs.back();
    my += ys.back();
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0) throw ConfigError("calibration minutes must not all be equal");
  PenaltyCalibration fit;
  fit.rate = sxy / sxx;
  fit.base = std::exp(my - fit.rate * mx);
  return fit;
}

Route make_route(int vehicle_index, int cycle, std::span<const Order* const> stops,
                 const Fleet& fleet) {
  Route r;
  r.vehicle_index = vehicle_index;
  r.cycle = cycle;
  double load = 0;
  for (const Order* o : stops) {
    r.stops.push_back(o->id);
    load += o->weight;
  }
  double charge = fleet.spec.battery_capacity;
  r.leg_loads.push_back(load);
  r.leg_charges.push_back(charge);
  Point at = fleet.depot;
  for (std::size_t i = 0; i < stops.size(); ++i) {
    const Order* o = stops[i];
    charge -= leg_energy(load, distance(at, o->destination), fleet.spec);
    load = i + 1 == stops.size() ? 0.0 : load - o->weight;
    at = o->destination;
    r.leg_loads.push_back(load);
    r.leg_charges.push_back(charge);
  }
  if (!stops.empty()) {
    charge -= leg_energy(load, distance(at, fleet.depot), fleet.spec);
    r.leg_charges.push_back(charge);
  }
  return r;
}

Route make_route(int vehicle_index, int cycle, const std::vector<OrderId>& stops,
                 const OrderTable& orders, const Fleet& fleet) {
  std::vector<const Order*> ptrs;
  ptrs.reserve(stops.size());
  for (OrderId id : stops) ptrs.push_back(&orders.at(id));
  return make_route(vehicle_index, cycle, ptrs, fleet);
}

namespace {

Violation violation(ViolationKind kind, int leg, const std::string& msg) {
  return Violation{kind, leg, msg};
}

}  // namespace

std::optional<Violation> check_route(const Route& route, const OrderTable& orders,
                                     const Fleet& fleet) {
  const VehicleSpec& spec = fleet.spec;
  const std::size_t n = route.stops.size();
  if (n == 0) {
    if (!route.leg_loads.empty() && std::abs(route.leg_loads.front()) > kLedgerTol)
      return violation(ViolationKind::kLoadLedger, 0, "empty route carries load");
    return std::nullopt;
  }
  if (route.leg_loads.size() != n + 1 || route.leg_charges.size() != n + 2)
    return violation(ViolationKind::kShape, 0, "ledger length does not match stop count");

  std::unordered_set<OrderId> seen;
  std::vector<const Order*> stops;
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Order* o = orders.find(route.stops[i]);
    const int leg = static_cast<int>(i);
    if (!o) return violation(ViolationKind::kUnknownOrder, leg, "unknown order " + std::to_string(route.stops[i]));
    if (!o->valid) return violation(ViolationKind::kInvalidOrder, leg, "invalid order on a physical route");
    if (!seen.insert(o->id).second)
      return violation(ViolationKind::kDuplicateStop, leg, "order " + std::to_string(o->id) + " visited twice");
    stops.push_back(o);
    total += o->weight;
  }
  if (total > spec.load_capacity + kLedgerTol) {
    std::ostringstream msg;
    msg << "payload " << total << " kg exceeds capacity " << spec.load_capacity << " kg";
    return violation(ViolationKind::kCapacity, 0, msg.str());
  }

  double load = total;
  if (std::abs(route.leg_loads[0] - load) > kLedgerTol || route.leg_loads[0] > spec.load_capacity + kLedgerTol)
    return violation(ViolationKind::kLoadLedger, 0, "departure load does not equal total payload");
  double charge = spec.battery_capacity;
  if (std::abs(route.leg_charges[0] - charge) > kLedgerTol)
    return violation(ViolationKind::kChargeLedger, 0, "departure charge is not a full battery");

  Point at = fleet.depot;
  for (std::size_t i = 0; i <= n; ++i) {
    const int leg = static_cast<int>(i);
    const Point next = i < n ? stops[i]->destination : fleet.depot;
    charge -= leg_energy(load, distance(at, next), spec);
    if (charge < -kLedgerTol) {
      std::ostringstream msg;
      msg << "battery depleted on leg " << leg << " (" << charge << " kWh left)";
      return violation(ViolationKind::kBattery, leg, msg.str());
    }
    if (std::abs(route.leg_charges[i + 1] - charge) > kLedgerTol)
      return violation(ViolationKind::kChargeLedger, leg, "charge ledger disagrees with leg energy");
    if (i < n) {
      load = i + 1 == n ? 0.0 : load - stops[i]->weight;
      if (std::abs(route.leg_loads[i + 1] - load) > kLedgerTol)
        return violation(ViolationKind::kLoadLedger, leg, "load ledger disagrees with delivered weight");
      at = next;
    }
  }
  if (std::abs(route.leg_loads[n]) > kLedgerTol)
    return violation(ViolationKind::kLoadLedger, static_cast<int>(n), "route returns with payload");
  return std::nullopt;
}

ItemizedCost route_cost(const Route& route, const OrderTable& orders, const Fleet& fleet,
                        const CostParams& params) {
  if (auto v = check_route(route, orders, fleet)) throw RouteInfeasible(*v);
  ItemizedCost cost;
  if (route.stops.empty()) return cost;
  double miles = 0;
  Point at = fleet.depot;
  for (OrderId id : route.stops) {
    const Point next = orders.at(id).destination;
    miles += distance(at, next);
    at = next;
  }
  miles += distance(at, fleet.depot);
  cost.distance = params.beta * miles;
  cost.energy = params.gamma * (route.leg_charges.front() - route.leg_charges.back());
  cost.dispatch = params.kappa;
  return cost;
}

ItemizedCost plan_cost(const FulfillmentPlan& plan, const OrderTable& pending,
                       const Fleet& fleet, const CostParams& params, int epoch) {
  ItemizedCost cost;
  std::unordered_set<OrderId> seen;
  auto claim = [&](OrderId id) -> const Order& {
    const Order* o = pending.find(id);
    if (!o) throw PlanInconsistency("plan references order " + std::to_string(id) + " outside the pending set");
    if (!seen.insert(id).second)
      throw PlanInconsistency("order " + std::to_string(id) + " appears more than once in the plan");
    return *o;
  };
  for (const CyclePlan& cp : plan.cycles) {
    if (static_cast<int>(cp.routes.size()) > fleet.size)
      throw PlanInconsistency("cycle " + std::to_string(cp.cycle) + " dispatches more vehicles than the fleet");
    for (std::size_t k = 0; k < cp.routes.size(); ++k) {
      const Route& r = cp.routes[k];
      if (r.cycle != cp.cycle) throw PlanInconsistency("route cycle does not match its cycle plan");
      if (r.vehicle_index != static_cast<int>(k) + 1)
        throw PlanInconsistency("vehicle indices must be contiguous from 1");
      for (OrderId id : r.stops) {
        const Order& o = claim(id);
        if (cp.cycle < o.arrival_cycle)
          throw PlanInconsistency("order " + std::to_string(id) + " served before it arrives");
        cost.delay += params.alpha * delay_penalty(o, cp.cycle, params);
      }
      cost += route_cost(r, pending, fleet, params);
    }
  }
  for (OrderId id : plan.overflow) {
    const Order& o = claim(id);
    cost.delay += params.alpha * overflow_penalty(o, epoch, params);
  }
  if (seen.size() != pending.size())
    throw PlanInconsistency("plan leaves " + std::to_string(pending.size() - seen.size()) +
                            " pending orders unaccounted for");
  return cost;
}

}  // namespace dof
