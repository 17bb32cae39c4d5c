#pragma once

#include <map>
#include <optional>
#include <utility>

#include "amod/plugin_queue.hpp"
#include "amod/swap_station.hpp"

namespace amod {

// Exogenous parameter vector. Canonical internal units: hours, per-hour rates,
// dollars, kW, kWh. Config loading converts from tagged units at the boundary.
struct ModelParams {
  double potential_demand = 0.0;   // lambda0, trips/h
  double value_of_time = 0.0;      // alpha, $/h of passenger waiting
  double trip_duration = 0.0;      // tau, h
  double logit_sensitivity = 0.0;  // eps, 1/$
  double logit_offset = 0.0;       // c0, $
  double arrival_soc = 0.0;        // delta, state of charge on arrival [0,1)
  double charge_speed = 0.0;       // s, kW
  double battery_capacity = 0.0;   // C, kWh
  double consumption_rate = 0.0;   // l, kW while driving
  double electricity_price = 0.0;  // pe, $/kWh
  double vehicle_cost = 0.0;       // Cav, $/vehicle-h
  double matching_scale_pax = 0.0; // A, h (pax wait = A/sqrt(idle vehicles))
  double matching_scale_chg = 0.0; // B, h (search = B/sqrt(open stations))
  double swap_service_time = 0.0;  // t_s at swap stations, h
  int swap_chargers = 0;           // Q per swap station (fixed by design)
  int station_capacity = 0;        // V, spots per station (either kind)
  double infra_cost_plugin = 0.0;  // phi_vc, $/charger-h
  double infra_cost_swap = 0.0;    // phi_bs, $/charger-h

  // NYC-calibrated defaults.
  static ModelParams nominal();
  void validate() const;

  // Mean plug-in charging time (also the battery recharge time at swap
  // stations): energy deficit over charging power.
  double charge_duration() const {
    return (1.0 - arrival_soc) * battery_capacity / charge_speed;
  }
  // Stations below this bound cannot sustain any operating fleet.
  double min_station_bound() const {
    const double r = matching_scale_chg * consumption_rate /
                     ((1.0 - arrival_soc) * battery_capacity);
    return r * r;
  }
};

enum class Strategy { kPlugIn, kSwap };

const char* to_string(Strategy s);

struct StationPlan {
  Strategy strategy = Strategy::kPlugIn;
  double stations = 0.0;             // K, continuous during search
  double chargers_per_station = 0.0; // Q; fixed to params.swap_chargers for swap
  int capacity = 0;                  // V

  static StationPlan plug_in(double stations, double chargers, const ModelParams& p);
  static StationPlan swap(double stations, const ModelParams& p);
  void validate(const ModelParams& p) const;
  double charger_cost_rate(const ModelParams& p) const;  // phi for this kind
  double infra_cost(const ModelParams& p) const;         // phi * K * Q
};

// Every endogenous market variable at one operating point.
struct MarketEquilibrium {
  double fare = 0.0;           // p_f, $/trip
  double demand = 0.0;         // lambda, trips/h
  double charging_rate = 0.0;  // gamma, vehicles/h entering charging shifts
  double pax_wait = 0.0;       // w^c, h
  double vehicle_idle = 0.0;   // w^v, h
  double fleet = 0.0;          // N
  double operating = 0.0;      // N1
  double charging_shift = 0.0; // N2
  double searching = 0.0;      // N2m
  double waiting = 0.0;        // N2w
  double in_service = 0.0;     // N2s
  double search_time = 0.0;    // t_m, h
  double station_wait = 0.0;   // t_w, h
  double blocking = 0.0;       // P_V
  double travel_cost = 0.0;    // c = p_f + alpha w^c, $
};

struct PaxTimes {
  double pax_wait = 0.0;     // w^c
  double vehicle_idle = 0.0; // w^v
};

struct FleetState {
  double blocking = 0.0;
  double station_wait = 0.0;
  double search_time = 0.0;
  double operating = 0.0;      // N1
  double searching = 0.0;      // N2m
  double waiting = 0.0;        // N2w
  double in_service = 0.0;     // N2s
  double charging_shift = 0.0; // N2
  double fleet = 0.0;          // N
};

struct GammaDomain {
  double gamma_zero = 0.0;    // charging demand at which N1 hits zero
  double gamma_peak = 0.0;    // argmax of N1 on (0, gamma_zero)
  double operating_max = 0.0; // N1 at gamma_peak
};

struct WelfareBreakdown {
  double surplus = 0.0;
  double profit = 0.0;
  double infra_cost = 0.0;
  double welfare = 0.0;  // surplus + profit - infra_cost
};

// Demand curve and its exact inverse/integral.
double logit_demand(double cost, const ModelParams& p);
double inverse_logit(double demand, const ModelParams& p);
double consumer_surplus(double cost, const ModelParams& p);

// Smallest operating fleet able to serve `demand` with positive waits.
double pax_feasibility_threshold(double demand, const ModelParams& p);

// Joint solve of the pickup-time and fleet-conservation equations; picks the
// smaller pax-wait root (the larger idle pool). nullopt when the operating
// fleet is below the feasibility threshold.
std::optional<PaxTimes> solve_pax_times(double demand, double operating,
                                        const ModelParams& p);

// Travel time to the nearest station with a free spot.
double search_time(double stations, double blocking, const ModelParams& p);

namespace detail {
// Hot-path root of the pickup-time cubic; exposed for the grid search.
double pax_wait_root(double demand, double b, double a_squared);
}  // namespace detail

// Per-plan analytics: queue metrics, fleet reductions, the charging-demand
// domain, and the reduced profit objective. Queue solves are memoized per
// gamma, which makes grid sweeps over lambda cheap.
class StationAnalytics {
 public:
  StationAnalytics(const StationPlan& plan, const ModelParams& params);

  const StationPlan& plan() const { return plan_; }
  const ModelParams& params() const { return params_; }
  double service_time() const { return service_time_; }

  // P_V and t_w at one station under total charging demand gamma.
  std::pair<double, double> blocking_and_wait(double gamma) const;

  FleetState fleet_from_gamma(double gamma) const;

  // Throws InfeasibleError when the station count is at or below the
  // minimum bound.
  GammaDomain gamma_domain() const;

  bool station_bound_satisfied() const;
  // Full feasibility check including the (always-true for logit) demand
  // condition at the fleet peak; reported by the solve command.
  bool plan_feasible() const;

  // Reduced objective; -inf for cells outside the feasible region.
  double profit(double demand, double gamma) const;

  // Assembles the full equilibrium at a feasible point; throws
  // InfeasibleError otherwise.
  MarketEquilibrium equilibrium(double demand, double gamma) const;

 private:
  StationPlan plan_;
  ModelParams params_;
  double service_time_;
  mutable std::map<double, std::pair<double, double>> queue_memo_;
};

// Free-function counterparts used by tests and bindings.
FleetState fleet_from_gamma(double gamma, const StationPlan& plan, const ModelParams& p);
GammaDomain gamma_domain(const StationPlan& plan, const ModelParams& p);
double platform_profit(double demand, double gamma, const StationPlan& plan,
                       const ModelParams& p);

WelfareBreakdown social_welfare(const MarketEquilibrium& eq, const StationPlan& plan,
                                const ModelParams& p);

}  // namespace amod
