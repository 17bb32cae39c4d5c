#include "amod/market.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "amod/errors.hpp"

namespace amod {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
  return v;
}
}  // namespace

ModelParams ModelParams::nominal() {
  ModelParams p;
  p.potential_demand = 944.0 * 60.0;  // 944 trips/min
  p.value_of_time = 2.58 * 60.0;      // 2.58 $/min
  p.trip_duration = 16.3 / 60.0;
  p.logit_sensitivity = 0.155;
  p.logit_offset = 15.48;
  p.arrival_soc = 0.10;
  p.charge_speed = 22.0;
  p.battery_capacity = 25.0;
  p.consumption_rate = 2.21;
  p.electricity_price = 0.12;
  p.vehicle_cost = 15.0;
  p.matching_scale_pax = 230.0 / 60.0;  // calibrated in minutes
  p.matching_scale_chg = 230.0 / 60.0;
  p.swap_service_time = 2.0 / 60.0;
  p.swap_chargers = 6;
  p.station_capacity = 15;
  p.infra_cost_plugin = 8.0;
  p.infra_cost_swap = 40.0;
  return p;
}

void ModelParams::validate() const {
  require_positive(potential_demand, "potential_demand");
  require_positive(value_of_time, "value_of_time");
  require_positive(trip_duration, "trip_duration");
  require_positive(logit_sensitivity, "logit_sensitivity");
  if (!std::isfinite(logit_offset)) throw std::invalid_argument("logit_offset must be finite");
  if (!(arrival_soc >= 0.0 && arrival_soc < 1.0)) {
    throw std::invalid_argument("arrival_soc must lie in [0,1)");
  }
  require_positive(charge_speed, "charge_speed");
  require_positive(battery_capacity, "battery_capacity");
  require_positive(consumption_rate, "consumption_rate");
  require_positive(electricity_price, "electricity_price");
  require_positive(vehicle_cost, "vehicle_cost");
  require_positive(matching_scale_pax, "matching_scale_pax");
  require_positive(matching_scale_chg, "matching_scale_chg");
  require_positive(swap_service_time, "swap_service_time");
  if (swap_chargers < 1) throw std::invalid_argument("swap_chargers must be >= 1");
  if (station_capacity < 1) throw std::invalid_argument("station_capacity must be >= 1");
  require_positive(infra_cost_plugin, "infra_cost_plugin");
  require_positive(infra_cost_swap, "infra_cost_swap");
}

const char* to_string(Strategy s) {
  return s == Strategy::kPlugIn ? "plugin" : "swap";
}

StationPlan StationPlan::plug_in(double stations, double chargers, const ModelParams& p) {
  StationPlan plan;
  plan.strategy = Strategy::kPlugIn;
  plan.stations = stations;
  plan.chargers_per_station = chargers;
  plan.capacity = p.station_capacity;
  plan.validate(p);
  return plan;
}

StationPlan StationPlan::swap(double stations, const ModelParams& p) {
  StationPlan plan;
  plan.strategy = Strategy::kSwap;
  plan.stations = stations;
  plan.chargers_per_station = static_cast<double>(p.swap_chargers);
  plan.capacity = p.station_capacity;
  plan.validate(p);
  return plan;
}

void StationPlan::validate(const ModelParams& p) const {
  require_positive(stations, "plan.stations");
  require_positive(chargers_per_station, "plan.chargers_per_station");
  if (capacity < 1) throw std::invalid_argument("plan.capacity must be >= 1");
  if (strategy == Strategy::kPlugIn &&
      static_cast<double>(capacity) < std::ceil(chargers_per_station)) {
    throw std::invalid_argument("plan: station capacity below charger count");
  }
  if (strategy == Strategy::kSwap &&
      chargers_per_station != static_cast<double>(p.swap_chargers)) {
    throw std::invalid_argument("plan: swap stations have a fixed charger count");
  }
}

double StationPlan::charger_cost_rate(const ModelParams& p) const {
  return strategy == Strategy::kPlugIn ? p.infra_cost_plugin : p.infra_cost_swap;
}

double StationPlan::infra_cost(const ModelParams& p) const {
  return charger_cost_rate(p) * stations * chargers_per_station;
}

double logit_demand(double cost, const ModelParams& p) {
  if (!std::isfinite(cost)) throw std::invalid_argument("logit_demand: cost must be finite");
  // lambda0 / (1 + e^{eps (c - c0)})
  return p.potential_demand / (1.0 + std::exp(p.logit_sensitivity * (cost - p.logit_offset)));
}

double inverse_logit(double demand, const ModelParams& p) {
  if (!(demand > 0.0) || !(demand < p.potential_demand)) {
    throw std::invalid_argument("inverse_logit: demand must lie in (0, potential_demand)");
  }
  const double y = demand / p.potential_demand;
  return p.logit_offset - std::log(y / (1.0 - y)) / p.logit_sensitivity;
}

double consumer_surplus(double cost, const ModelParams& p) {
  if (!std::isfinite(cost)) throw std::invalid_argument("consumer_surplus: cost must be finite");
  return p.potential_demand / p.logit_sensitivity *
         std::log1p(std::exp(-p.logit_sensitivity * (cost - p.logit_offset)));
}

double pax_feasibility_threshold(double demand, const ModelParams& p) {
  static const double kCoef = std::cbrt(2.0) + std::cbrt(0.25);
  return kCoef * std::pow(p.matching_scale_pax * demand, 2.0 / 3.0) +
         demand * p.trip_duration;
}

namespace detail {

// Smaller positive root of lambda x^3 - b x^2 + A^2 = 0, which lives in
// (0, 2b/(3 lambda)). Safeguarded Newton: steps leaving the bracket fall
// back to bisection, so convergence is unconditional and deterministic.
double pax_wait_root(double demand, double b, double a2) {
  const double x_min = 2.0 * b / (3.0 * demand);
  double lo = 0.0, hi = x_min;
  double x = 0.5 * x_min;
  for (int i = 0; i < 100; ++i) {
    const double phi = (demand * x - b) * x * x + a2;
    (phi > 0.0 ? lo : hi) = x;
    const double dphi = (3.0 * demand * x - 2.0 * b) * x;
    double next = dphi != 0.0 ? x - phi / dphi : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * x) return next;
    x = next;
  }
  return x;
}

}  // namespace detail

std::optional<PaxTimes> solve_pax_times(double demand, double operating,
                                        const ModelParams& p) {
  if (!(demand > 0.0)) throw std::invalid_argument("solve_pax_times: demand must be positive");
  if (!(operating > 0.0)) {
    throw std::invalid_argument("solve_pax_times: operating fleet must be positive");
  }
  if (operating < pax_feasibility_threshold(demand, p)) return std::nullopt;

  const double b = operating - demand * p.trip_duration;
  const double a2 = p.matching_scale_pax * p.matching_scale_pax;
  PaxTimes t;
  t.pax_wait = detail::pax_wait_root(demand, b, a2);
  const double idle = (p.matching_scale_pax / t.pax_wait) *
                      (p.matching_scale_pax / t.pax_wait);
  t.vehicle_idle = idle / demand;
  return t;
}

double search_time(double stations, double blocking, const ModelParams& p) {
  require_positive(stations, "search_time: stations");
  if (!(blocking >= 0.0 && blocking < 1.0)) {
    throw std::invalid_argument("search_time: blocking must lie in [0,1)");
  }
  return p.matching_scale_chg / std::sqrt(stations * (1.0 - blocking));
}

StationAnalytics::StationAnalytics(const StationPlan& plan, const ModelParams& params)
    : plan_(plan), params_(params) {
  params_.validate();
  plan_.validate(params_);
  service_time_ = plan_.strategy == Strategy::kPlugIn ? params_.charge_duration()
                                                      : params_.swap_service_time;
}

std::pair<double, double> StationAnalytics::blocking_and_wait(double gamma) const {
  if (!(gamma >= 0.0)) throw std::invalid_argument("blocking_and_wait: gamma must be >= 0");
  auto hit = queue_memo_.find(gamma);
  if (hit != queue_memo_.end()) return hit->second;

  std::pair<double, double> result;
  const double per_station = gamma / plan_.stations;
  if (plan_.strategy == Strategy::kPlugIn) {
    PluginStationInput in;
    in.arrival_rate = per_station;
    in.service_time = service_time_;
    in.chargers = plan_.chargers_per_station;
    in.capacity = plan_.capacity;
    const QueueMetrics m = mmqv_continuous(in);
    result = {m.blocking_probability, m.mean_wait};
  } else {
    SwapStationInput in;
    in.arrival_rate = per_station;
    in.swap_time = params_.swap_service_time;
    in.battery_charge_time = params_.charge_duration();
    in.chargers = params_.swap_chargers;
    in.ev_buffer = plan_.capacity;
    const SwapSteadyState s = swap_steady_state(in);
    result = {s.blocking_probability, s.mean_wait};
  }
  if (queue_memo_.size() > 4096) queue_memo_.clear();
  queue_memo_.emplace(gamma, result);
  return result;
}

FleetState StationAnalytics::fleet_from_gamma(double gamma) const {
  const auto [blocking, wait] = blocking_and_wait(gamma);
  FleetState f;
  f.blocking = blocking;
  f.station_wait = wait;
  f.search_time = search_time(plan_.stations, blocking, params_);
  f.searching = gamma * f.search_time;
  f.waiting = gamma * wait;
  f.in_service = gamma * service_time_;
  // energy balance: driving fleet spends what the chargers put back
  f.fleet = gamma * (1.0 - params_.arrival_soc) * params_.battery_capacity /
                params_.consumption_rate +
            f.waiting + f.in_service;
  f.charging_shift = f.searching + f.waiting + f.in_service;
  f.operating = f.fleet - f.charging_shift;
  return f;
}

bool StationAnalytics::station_bound_satisfied() const {
  return plan_.stations > params_.min_station_bound();
}

GammaDomain StationAnalytics::gamma_domain() const {
  if (!station_bound_satisfied()) {
    throw InfeasibleError("gamma_domain: station count at or below the minimum bound");
  }
  // N1(gamma) = 0 exactly when P_V reaches 1 - bound/K; P_V is monotone in
  // gamma, so bracket and bisect on it.
  const double target = 1.0 - params_.min_station_bound() / plan_.stations;
  double lo = 0.0, hi = plan_.stations;  // unit per-station load as a seed
  while (blocking_and_wait(hi).first < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) throw NumericError("gamma_domain: failed to bracket gamma_zero");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-10 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (blocking_and_wait(mid).first < target ? lo : hi) = mid;
  }
  GammaDomain d;
  d.gamma_zero = 0.5 * (lo + hi);

  // golden-section maximization of the unimodal N1 over (0, gamma_zero)
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = d.gamma_zero;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = fleet_from_gamma(c1).operating;
  double f2 = fleet_from_gamma(c2).operating;
  for (int i = 0; i < 200 && b - a > 1e-9 * d.gamma_zero; ++i) {
    if (f1 > f2) {
      b = c2; c2 = c1; f2 = f1;
      c1 = b - gr * (b - a);
      f1 = fleet_from_gamma(c1).operating;
    } else {
      a = c1; c1 = c2; f1 = f2;
      c2 = a + gr * (b - a);
      f2 = fleet_from_gamma(c2).operating;
    }
  }
  d.gamma_peak = 0.5 * (a + b);
  d.operating_max = fleet_from_gamma(d.gamma_peak).operating;
  return d;
}

bool StationAnalytics::plan_feasible() const {
  if (!station_bound_satisfied()) return false;
  const GammaDomain d = gamma_domain();
  // positive demand must remain when the fare hits zero at the fleet peak
  const double cost_floor = params_.value_of_time * params_.matching_scale_pax /
                            std::sqrt(d.operating_max);
  return logit_demand(cost_floor, params_) > 0.0;
}

double StationAnalytics::profit(double demand, double gamma) const {
  if (!(demand > 0.0) || !(demand < params_.potential_demand) || !(gamma > 0.0)) {
    return -kInf;
  }
  const FleetState f = fleet_from_gamma(gamma);
  if (!(f.operating > 0.0)) return -kInf;
  const auto times = solve_pax_times(demand, f.operating, params_);
  if (!times) return -kInf;
  const double fare = inverse_logit(demand, params_) -
                      params_.value_of_time * times->pax_wait;
  return demand * fare -
         gamma * (1.0 - params_.arrival_soc) * params_.battery_capacity *
             params_.electricity_price -
         f.fleet * params_.vehicle_cost;
}

MarketEquilibrium StationAnalytics::equilibrium(double demand, double gamma) const {
  if (!(demand > 0.0) || !(demand < params_.potential_demand) || !(gamma > 0.0)) {
    throw InfeasibleError("equilibrium: operating point outside the admissible box");
  }
  const FleetState f = fleet_from_gamma(gamma);
  if (!(f.operating > 0.0)) {
    throw InfeasibleError("equilibrium: no operating fleet at this charging demand");
  }
  const auto times = solve_pax_times(demand, f.operating, params_);
  if (!times) throw InfeasibleError("equilibrium: demand unsupportable by operating fleet");

  MarketEquilibrium eq;
  eq.demand = demand;
  eq.charging_rate = gamma;
  eq.pax_wait = times->pax_wait;
  eq.vehicle_idle = times->vehicle_idle;
  eq.travel_cost = inverse_logit(demand, params_);
  eq.fare = eq.travel_cost - params_.value_of_time * eq.pax_wait;
  eq.fleet = f.fleet;
  eq.operating = f.operating;
  eq.charging_shift = f.charging_shift;
  eq.searching = f.searching;
  eq.waiting = f.waiting;
  eq.in_service = f.in_service;
  eq.search_time = f.search_time;
  eq.station_wait = f.station_wait;
  eq.blocking = f.blocking;
  return eq;
}

FleetState fleet_from_gamma(double gamma, const StationPlan& plan, const ModelParams& p) {
  return StationAnalytics(plan, p).fleet_from_gamma(gamma);
}

GammaDomain gamma_domain(const StationPlan& plan, const ModelParams& p) {
  return StationAnalytics(plan, p).gamma_domain();
}

double platform_profit(double demand, double gamma, const StationPlan& plan,
                       const ModelParams& p) {
  return StationAnalytics(plan, p).profit(demand, gamma);
}

WelfareBreakdown social_welfare(const MarketEquilibrium& eq, const StationPlan& plan,
                                const ModelParams& p) {
  WelfareBreakdown w;
  w.surplus = consumer_surplus(eq.travel_cost, p);
  w.profit = eq.demand * eq.fare -
             eq.charging_rate * (1.0 - p.arrival_soc) * p.battery_capacity *
                 p.electricity_price -
             eq.fleet * p.vehicle_cost;
  w.infra_cost = plan.infra_cost(p);
  w.welfare = w.surplus + w.profit - w.infra_cost;
  return w;
}

}  // namespace amod
