#include "amod/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace amod {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* const kSweepCsvHeader =
    "schema_version,parameter,value,strategy,K,Q,p_f,lambda,gamma,w_c,w_v,t_m,t_w,P_V,"
    "N,N1,N2,N2m,N2w,N2s,profit,surplus,infra_cost,welfare,status";

namespace {

void append_outcome_columns(std::ostringstream& out, const PlanOutcome& o) {
  const MarketEquilibrium& e = o.equilibrium;
  for (double v : {o.plan.stations, o.plan.chargers_per_station, e.fare, e.demand,
                   e.charging_rate, e.pax_wait, e.vehicle_idle, e.search_time,
                   e.station_wait, e.blocking, e.fleet, e.operating, e.charging_shift,
                   e.searching, e.waiting, e.in_service, o.profit, o.surplus,
                   o.infra_cost, o.welfare}) {
    out << format_double(v) << ',';
  }
}

void append_empty_outcome_columns(std::ostringstream& out) {
  for (int i = 0; i < 20; ++i) out << ',';
}

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += "\"\"";
    else if (c == '\n' || c == '\r') q += ' ';
    else q += c;
  }
  q += '"';
  return q;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& parameter) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    out << "1," << parameter << ',' << format_double(row.value) << ','
        << to_string(row.strategy) << ',';
    if (row.outcome) {
      append_outcome_columns(out, *row.outcome);
    } else {
      append_empty_outcome_columns(out);
    }
    out << csv_quote(row.status) << '\n';
  }
  return out.str();
}

std::string compare_csv(const std::vector<CompareCell>& cells,
                        const std::string& axis_parameter) {
  std::ostringstream out;
  out << "schema_version,infra_cost_swap," << axis_parameter
      << ",welfare_swap,welfare_plugin,delta_welfare,status\n";
  for (const CompareCell& c : cells) {
    out << "1," << format_double(c.infra_cost_swap) << ',' << format_double(c.axis_value)
        << ',' << format_double(c.welfare_swap) << ',' << format_double(c.welfare_plugin)
        << ',' << format_double(c.delta) << ',' << csv_quote(c.status) << '\n';
  }
  return out.str();
}

std::string calibration_csv(const SqrtLawFit& fit) {
  std::ostringstream out;
  out << "schema_version,stations,mean_time_h,fitted_time_h\n";
  for (const SearchTimePoint& p : fit.points) {
    out << "1," << p.stations << ',' << format_double(p.mean_time) << ','
        << format_double(fit.scale / std::sqrt(static_cast<double>(p.stations))) << '\n';
  }
  return out.str();
}

namespace {

void put(std::ostringstream& out, const char* name, double v, const char* unit) {
  out << "  " << name << " = " << format_double(v);
  if (unit[0] != '\0') out << ' ' << unit;
  out << '\n';
}

}  // namespace

std::string equilibrium_text(const MarketEquilibrium& eq, const WelfareBreakdown& w) {
  std::ostringstream out;
  put(out, "fare p_f        ", eq.fare, "$/trip");
  put(out, "demand lambda   ", eq.demand, "/h");
  put(out, "charging gamma  ", eq.charging_rate, "/h");
  put(out, "pax wait w_c    ", eq.pax_wait, "h");
  put(out, "vehicle idle w_v", eq.vehicle_idle, "h");
  put(out, "search time t_m ", eq.search_time, "h");
  put(out, "station wait t_w", eq.station_wait, "h");
  put(out, "blocking P_V    ", eq.blocking, "");
  put(out, "fleet N         ", eq.fleet, "vehicles");
  put(out, "operating N1    ", eq.operating, "vehicles");
  put(out, "charging N2     ", eq.charging_shift, "vehicles");
  put(out, "searching N2m   ", eq.searching, "vehicles");
  put(out, "waiting N2w     ", eq.waiting, "vehicles");
  put(out, "in service N2s  ", eq.in_service, "vehicles");
  put(out, "travel cost c   ", eq.travel_cost, "$");
  put(out, "profit          ", w.profit, "$/h");
  put(out, "surplus         ", w.surplus, "$/h");
  put(out, "infra cost      ", w.infra_cost, "$/h");
  put(out, "welfare         ", w.welfare, "$/h");
  return out.str();
}

std::string plan_text(const PlanOutcome& outcome) {
  std::ostringstream out;
  out << "strategy " << to_string(outcome.plan.strategy) << '\n';
  put(out, "stations K      ", outcome.plan.stations, "");
  put(out, "chargers Q      ", outcome.plan.chargers_per_station, "");
  WelfareBreakdown w;
  w.profit = outcome.profit;
  w.surplus = outcome.surplus;
  w.infra_cost = outcome.infra_cost;
  w.welfare = outcome.welfare;
  out << equilibrium_text(outcome.equilibrium, w);
  return out.str();
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json equilibrium_node(const MarketEquilibrium& e) {
  ordered_json j;
  j["fare"] = e.fare;
  j["demand"] = e.demand;
  j["charging_rate"] = e.charging_rate;
  j["pax_wait"] = e.pax_wait;
  j["vehicle_idle"] = e.vehicle_idle;
  j["search_time"] = e.search_time;
  j["station_wait"] = e.station_wait;
  j["blocking"] = e.blocking;
  j["fleet"] = e.fleet;
  j["operating"] = e.operating;
  j["charging_shift"] = e.charging_shift;
  j["searching"] = e.searching;
  j["waiting"] = e.waiting;
  j["in_service"] = e.in_service;
  j["travel_cost"] = e.travel_cost;
  return j;
}

ordered_json plan_node(const StationPlan& p) {
  ordered_json j;
  j["strategy"] = to_string(p.strategy);
  j["stations"] = p.stations;
  j["chargers_per_station"] = p.chargers_per_station;
  j["capacity"] = p.capacity;
  return j;
}

}  // namespace

std::string solve_json(const StationPlan& plan, const MarketEquilibrium& eq,
                       const WelfareBreakdown& w) {
  ordered_json j;
  j["schema"] = "amod-solve-v1";
  j["plan"] = plan_node(plan);
  j["equilibrium"] = equilibrium_node(eq);
  j["profit"] = w.profit;
  j["surplus"] = w.surplus;
  j["infra_cost"] = w.infra_cost;
  j["welfare"] = w.welfare;
  return j.dump(2) + "\n";
}

std::string plan_json(const PlanOutcome& outcome) {
  ordered_json j;
  j["schema"] = "amod-plan-v1";
  j["plan"] = plan_node(outcome.plan);
  j["equilibrium"] = equilibrium_node(outcome.equilibrium);
  j["profit"] = outcome.profit;
  j["surplus"] = outcome.surplus;
  j["infra_cost"] = outcome.infra_cost;
  j["welfare"] = outcome.welfare;
  return j.dump(2) + "\n";
}

std::string validation_json(const SimResult& sim, double analytic_blocking,
                            double analytic_wait, double analytic_mean) {
  ordered_json j;
  j["schema"] = "amod-validate-v1";
  j["analytic"]["blocking"] = analytic_blocking;
  j["analytic"]["wait"] = analytic_wait;
  j["analytic"]["mean_in_system"] = analytic_mean;
  j["empirical"]["blocking"] = sim.blocking_estimate;
  j["empirical"]["blocking_stderr"] = sim.blocking_stderr;
  j["empirical"]["wait"] = sim.wait_estimate;
  j["empirical"]["wait_stderr"] = sim.wait_stderr;
  j["empirical"]["mean_in_system"] = sim.mean_in_system;
  j["empirical"]["mean_in_system_stderr"] = sim.mean_in_system_stderr;
  j["events"] = sim.events_processed;
  return j.dump(2) + "\n";
}

std::string calibration_json(const SqrtLawFit& fit) {
  ordered_json j;
  j["schema"] = "amod-calibrate-v1";
  j["scale"] = fit.scale;
  j["r_squared"] = fit.r_squared;
  ordered_json pts = ordered_json::array();
  for (const SearchTimePoint& p : fit.points) {
    ordered_json e;
    e["stations"] = p.stations;
    e["mean_time"] = p.mean_time;
    pts.push_back(e);
  }
  j["points"] = pts;
  return j.dump(2) + "\n";
}

}  // namespace amod
