// Domain types and cost/feasibility arithmetic shared by every solver.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dof/error.hpp"

namespace dof {

// Default delay-penalty calibration: least-squares fit through the
// $1.00 / $2.73 / $7.42 escalation at 4, 5 and 6 elapsed cycles (alpha = 0.05).
inline constexpr double kDefaultPenaltyRate = 1.0020895285896445;
inline constexpr double kDefaultPenaltyBase = 0.3635318081528291;

// Absolute tolerance for load/charge ledger checks.
inline constexpr double kLedgerTol = 1e-6;

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

struct CostParams {
  double alpha = 0.05;   // $ per penalty unit
  double beta = 0.2;     // $ per mile (hourly cost / cruise speed)
  double gamma = 5.0;    // $ per kWh
  double kappa = 1.0;    // $ per dispatch
  double penalty_base = kDefaultPenaltyBase;
  double penalty_rate = kDefaultPenaltyRate;  // per elapsed cycle
  int horizon_T = 2;
  double cycle_minutes = 10.0;

  void validate() const;
};

struct VehicleSpec {
  double load_capacity = 20.0;     // kg
  double battery_capacity = 0.5;   // kWh
  double energy_base = 0.1;        // kW
  double energy_per_kg = 0.1;      // kW/kg
  double cruise_speed = 50.0;      // mph

  void validate() const;
};

struct Fleet {
  VehicleSpec spec;
  int size = 2;
  Point depot{1.0, 1.0};

  void validate() const;
};

using OrderId = std::int64_t;

struct Order {
  OrderId id = 0;
  double weight = 0.0;
  Point destination;
  int arrival_cycle = 0;
  double urgency = 1.0;
  bool valid = true;
};

// Id -> order lookup over a borrowed or owned list of orders.
class OrderTable {
 public:
  OrderTable() = default;
  explicit OrderTable(std::span<const Order> orders);

  void add(const Order& order);
  const Order* find(OrderId id) const;
  const Order& at(OrderId id) const;
  const std::vector<Order>& orders() const { return orders_; }
  std::size_t size() const { return orders_.size(); }

 private:
  std::vector<Order> orders_;
  std::unordered_map<OrderId, std::size_t> index_;
};

// Depot-to-depot tour. leg_loads holds the payload leaving the depot followed by
// the payload after each stop; leg_charges holds the charge leaving the depot,
// after each stop, and on return to the depot.
struct Route {
  int vehicle_index = 1;
  int cycle = 0;
  std::vector<OrderId> stops;
  std::vector<double> leg_loads;
  std::vector<double> leg_charges;
};

struct ItemizedCost {
  double delay = 0.0;
  double distance = 0.0;
  double energy = 0.0;
  double dispatch = 0.0;

  double total() const { return delay + distance + energy + dispatch; }
  ItemizedCost& operator+=(const ItemizedCost& o);
};

ItemizedCost operator+(ItemizedCost a, const ItemizedCost& b);

struct CyclePlan {
  int cycle = 0;
  std::vector<Route> routes;
  std::vector<OrderId> deferred;
};

struct FulfillmentPlan {
  std::vector<CyclePlan> cycles;
  std::vector<OrderId> overflow;
};

enum class ViolationKind {
  kCapacity,
  kBattery,
  kLoadLedger,
  kChargeLedger,
  kDuplicateStop,
  kUnknownOrder,
  kInvalidOrder,
  kShape,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::kShape;
  int leg = 0;
  std::string message;
};

class RouteInfeasible : public Error {
 public:
  explicit RouteInfeasible(Violation v);
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

// Power draw in kW when carrying `load` kg.
double energy_rate(double load, const VehicleSpec& spec);

// Energy in kWh for a leg of `miles` flown at cruise speed carrying `load` kg.
double leg_energy(double load, double miles, const VehicleSpec& spec);

// Penalty units for completing `order` in `completed_cycle`. Up to T+1 elapsed
// cycles the charge is one unit per cycle pending; beyond that it escalates
// exponentially with elapsed cycles.
double delay_penalty(const Order& order, int completed_cycle, const CostParams& params);

// Penalty units for leaving `order` unserved through the horizon that starts at
// `epoch` (the ad-hoc cycle T+1). Evaluated at T+1 cycles past the horizon start
// plus the order's age, never below T+3 elapsed cycles.
double overflow_penalty(const Order& order, int epoch, const CostParams& params);

struct PenaltyCalibration {
  double base = 0.0;
  double rate = 0.0;
};

// Fits base*exp(rate*elapsed_cycles) to dollar penalties observed at the given
// elapsed minutes.
PenaltyCalibration fit_penalty_calibration(std::span<const double> minutes,
                                           std::span<const double> dollars, double alpha,
                                           double cycle_minutes);

// Builds the load/charge ledgers for visiting `stops` in order.
Route make_route(int vehicle_index, int cycle, std::span<const Order* const> stops,
                 const Fleet& fleet);
Route make_route(int vehicle_index, int cycle, const std::vector<OrderId>& stops,
                 const OrderTable& orders, const Fleet& fleet);

std::optional<Violation> check_route(const Route& route, const OrderTable& orders,
                                     const Fleet& fleet);

// Distance, energy and dispatch terms of one route; delay is charged at plan level.
ItemizedCost route_cost(const Route& route, const OrderTable& orders, const Fleet& fleet,
                        const CostParams& params);

// Full cost of a plan over `pending`. Every pending order must be served exactly
// once or listed in the overflow set; overflow is charged relative to `epoch`.
ItemizedCost plan_cost(const FulfillmentPlan& plan, const OrderTable& pending,
                       const Fleet& fleet, const CostParams& params, int epoch);

}  // namespace dof
