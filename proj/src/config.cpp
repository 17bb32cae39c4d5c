#include "amod/config.hpp"

#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>

#include <json.hpp>

#include "amod/errors.hpp"

namespace amod {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

// value + unit tag -> canonical units (hours, per-hour, dollars, kW, kWh)
double tagged(const json& node, const std::string& field,
              const std::map<std::string, double>& units) {
  if (!node.is_string()) {
    std::string expected;
    for (const auto& [name, factor] : units) {
      if (!expected.empty()) expected += "|";
      expected += name;
    }
    fail(field, "dimensional value must be a string like \"<number> <" + expected + ">\"");
  }
  std::istringstream in(node.get<std::string>());
  double value = 0.0;
  std::string unit;
  if (!(in >> value >> unit) || !(in >> std::ws).eof()) {
    fail(field, "expected \"<number> <unit>\"");
  }
  const auto it = units.find(unit);
  if (it == units.end()) {
    std::string expected;
    for (const auto& [name, factor] : units) {
      if (!expected.empty()) expected += "|";
      expected += name;
    }
    fail(field, "unknown unit '" + unit + "' (expected " + expected + ")");
  }
  return value * it->second;
}

const std::map<std::string, double> kTime{{"h", 1.0}, {"hour", 1.0},
                                          {"min", 1.0 / 60.0}, {"minute", 1.0 / 60.0}};
const std::map<std::string, double> kRate{{"per-h", 1.0}, {"per-hour", 1.0}, {"per-min", 60.0}};
const std::map<std::string, double> kMoneyPerTime{
    {"usd-per-h", 1.0}, {"usd-per-hour", 1.0}, {"usd-per-min", 60.0}};
const std::map<std::string, double> kMoney{{"usd", 1.0}};
const std::map<std::string, double> kPerMoney{{"per-usd", 1.0}};
const std::map<std::string, double> kPower{{"kW", 1.0}};
const std::map<std::string, double> kEnergy{{"kWh", 1.0}};
const std::map<std::string, double> kMoneyPerEnergy{{"usd-per-kWh", 1.0}};
const std::map<std::string, double> kMoneyPerChargerTime{{"usd-per-charger-h", 1.0},
                                                         {"usd-per-charger-hour", 1.0}};
const std::map<std::string, double> kSpeed{{"mph", 1.0}};
const std::map<std::string, double> kLength{{"mi", 1.0}, {"mile", 1.0}, {"miles", 1.0}};

void reject_unknown(const json& obj, const std::string& scope,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) { ok = true; break; }
    }
    if (!ok) fail(scope.empty() ? key : scope + "." + key, "unknown key");
  }
}

const json& require(const json& obj, const std::string& scope, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(scope.empty() ? key : scope + "." + key, "missing");
  return *it;
}

double plain_number(const json& node, const std::string& field) {
  if (!node.is_number()) fail(field, "expected a number");
  return node.get<double>();
}

long plain_integer(const json& node, const std::string& field) {
  if (!node.is_number_integer()) fail(field, "expected an integer");
  return node.get<long>();
}

Strategy parse_strategy(const json& node, const std::string& field) {
  if (node.is_string()) {
    const std::string s = node.get<std::string>();
    if (s == "plugin") return Strategy::kPlugIn;
    if (s == "swap") return Strategy::kSwap;
  }
  fail(field, "expected \"plugin\" or \"swap\"");
}

ModelParams parse_params(const json& node) {
  reject_unknown(node, "params",
                 {"potential_demand", "value_of_time", "trip_duration", "logit_sensitivity",
                  "logit_offset", "arrival_soc", "charge_speed", "battery_capacity",
                  "consumption_rate", "electricity_price", "vehicle_cost",
                  "matching_scale_pax", "matching_scale_chg", "swap_service_time",
                  "swap_chargers", "station_capacity", "infra_cost_plugin",
                  "infra_cost_swap"});
  ModelParams p;
  const std::string s = "params";
  p.potential_demand = tagged(require(node, s, "potential_demand"), "params.potential_demand", kRate);
  p.value_of_time = tagged(require(node, s, "value_of_time"), "params.value_of_time", kMoneyPerTime);
  p.trip_duration = tagged(require(node, s, "trip_duration"), "params.trip_duration", kTime);
  p.logit_sensitivity =
      tagged(require(node, s, "logit_sensitivity"), "params.logit_sensitivity", kPerMoney);
  p.logit_offset = tagged(require(node, s, "logit_offset"), "params.logit_offset", kMoney);
  p.arrival_soc = plain_number(require(node, s, "arrival_soc"), "params.arrival_soc");
  p.charge_speed = tagged(require(node, s, "charge_speed"), "params.charge_speed", kPower);
  p.battery_capacity =
      tagged(require(node, s, "battery_capacity"), "params.battery_capacity", kEnergy);
  p.consumption_rate =
      tagged(require(node, s, "consumption_rate"), "params.consumption_rate", kPower);
  p.electricity_price =
      tagged(require(node, s, "electricity_price"), "params.electricity_price", kMoneyPerEnergy);
  p.vehicle_cost = tagged(require(node, s, "vehicle_cost"), "params.vehicle_cost", kMoneyPerTime);
  p.matching_scale_pax =
      tagged(require(node, s, "matching_scale_pax"), "params.matching_scale_pax", kTime);
  p.matching_scale_chg =
      tagged(require(node, s, "matching_scale_chg"), "params.matching_scale_chg", kTime);
  p.swap_service_time =
      tagged(require(node, s, "swap_service_time"), "params.swap_service_time", kTime);
  p.swap_chargers =
      static_cast<int>(plain_integer(require(node, s, "swap_chargers"), "params.swap_chargers"));
  p.station_capacity = static_cast<int>(
      plain_integer(require(node, s, "station_capacity"), "params.station_capacity"));
  p.infra_cost_plugin = tagged(require(node, s, "infra_cost_plugin"),
                               "params.infra_cost_plugin", kMoneyPerChargerTime);
  p.infra_cost_swap = tagged(require(node, s, "infra_cost_swap"), "params.infra_cost_swap",
                             kMoneyPerChargerTime);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  return p;
}

GridSpec parse_grid(const json& node) {
  reject_unknown(node, "grid",
                 {"lambda_points", "gamma_points", "refine_rounds", "refine_shrink",
                  "outer_k_points", "outer_q_points", "outer_refine_rounds"});
  GridSpec g;
  if (node.contains("lambda_points"))
    g.lambda_points = static_cast<int>(plain_integer(node["lambda_points"], "grid.lambda_points"));
  if (node.contains("gamma_points"))
    g.gamma_points = static_cast<int>(plain_integer(node["gamma_points"], "grid.gamma_points"));
  if (node.contains("refine_rounds"))
    g.refine_rounds = static_cast<int>(plain_integer(node["refine_rounds"], "grid.refine_rounds"));
  if (node.contains("refine_shrink"))
    g.refine_shrink = plain_number(node["refine_shrink"], "grid.refine_shrink");
  if (node.contains("outer_k_points"))
    g.outer_k_points =
        static_cast<int>(plain_integer(node["outer_k_points"], "grid.outer_k_points"));
  if (node.contains("outer_q_points"))
    g.outer_q_points =
        static_cast<int>(plain_integer(node["outer_q_points"], "grid.outer_q_points"));
  if (node.contains("outer_refine_rounds"))
    g.outer_refine_rounds = static_cast<int>(
        plain_integer(node["outer_refine_rounds"], "grid.outer_refine_rounds"));
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  return g;
}

std::vector<double> number_list(const json& node, const std::string& field) {
  if (!node.is_array() || node.empty()) fail(field, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& v : node) out.push_back(plain_number(v, field));
  return out;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  reject_unknown(root, "",
                 {"schema", "seed", "params", "plan", "search", "grid", "sweep", "compare",
                  "validate", "calibration"});
  if (require(root, "", "schema").get<std::string>() != "amod-scenario-v1") {
    fail("schema", "expected \"amod-scenario-v1\"");
  }

  ScenarioConfig cfg;
  cfg.params = parse_params(require(root, "", "params"));
  if (root.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(plain_integer(root["seed"], "seed"));
  }
  if (root.contains("grid")) cfg.grid = parse_grid(root["grid"]);

  if (root.contains("plan")) {
    const json& p = root["plan"];
    reject_unknown(p, "plan", {"strategy", "stations", "chargers_per_station"});
    const Strategy strategy = parse_strategy(require(p, "plan", "strategy"), "plan.strategy");
    const double stations = plain_number(require(p, "plan", "stations"), "plan.stations");
    try {
      if (strategy == Strategy::kPlugIn) {
        const double chargers = plain_number(require(p, "plan", "chargers_per_station"),
                                             "plan.chargers_per_station");
        cfg.plan = StationPlan::plug_in(stations, chargers, cfg.params);
      } else {
        if (p.contains("chargers_per_station")) {
          fail("plan.chargers_per_station", "fixed by params.swap_chargers for swap plans");
        }
        cfg.plan = StationPlan::swap(stations, cfg.params);
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("plan: ") + e.what());
    }
  }

  if (root.contains("search")) {
    const json& sr = root["search"];
    reject_unknown(sr, "search", {"k_min", "k_max", "q_min", "q_max"});
    if (sr.contains("k_min")) cfg.k_range.lo = plain_number(sr["k_min"], "search.k_min");
    if (sr.contains("k_max")) cfg.k_range.hi = plain_number(sr["k_max"], "search.k_max");
    if (sr.contains("q_min")) cfg.q_range.lo = plain_number(sr["q_min"], "search.q_min");
    if (sr.contains("q_max")) cfg.q_range.hi = plain_number(sr["q_max"], "search.q_max");
    if (!(cfg.k_range.lo > 0.0) || !(cfg.k_range.hi > cfg.k_range.lo)) {
      fail("search.k_min", "need 0 < k_min < k_max");
    }
    if (!(cfg.q_range.lo > 0.0) || !(cfg.q_range.hi > cfg.q_range.lo)) {
      fail("search.q_min", "need 0 < q_min < q_max");
    }
  }

  if (root.contains("sweep")) {
    const json& sw = root["sweep"];
    reject_unknown(sw, "sweep", {"parameter", "values", "strategies", "hold_cost_ratio"});
    SweepSpec spec;
    spec.parameter = require(sw, "sweep", "parameter").get<std::string>();
    if (!sw.contains("values") || !sw["values"].is_array()) {
      fail("sweep.values", "expected an array (may be empty)");
    }
    for (const auto& v : sw["values"]) spec.values.push_back(plain_number(v, "sweep.values"));
    const json& strategies = require(sw, "sweep", "strategies");
    if (!strategies.is_array() || strategies.empty()) {
      fail("sweep.strategies", "expected a non-empty array");
    }
    for (const auto& sname : strategies) {
      spec.strategies.push_back(parse_strategy(sname, "sweep.strategies"));
    }
    if (sw.contains("hold_cost_ratio")) {
      if (!sw["hold_cost_ratio"].is_boolean()) fail("sweep.hold_cost_ratio", "expected a boolean");
      spec.hold_cost_ratio = sw["hold_cost_ratio"].get<bool>();
    }
    cfg.sweep_spec = std::move(spec);
  }

  if (root.contains("compare")) {
    const json& cp = root["compare"];
    reject_unknown(cp, "compare", {"infra_cost_swap_values", "axis_parameter", "axis_values"});
    CompareSpec spec;
    spec.infra_cost_swap_values = number_list(require(cp, "compare", "infra_cost_swap_values"),
                                              "compare.infra_cost_swap_values");
    spec.axis_parameter = require(cp, "compare", "axis_parameter").get<std::string>();
    spec.axis_values = number_list(require(cp, "compare", "axis_values"), "compare.axis_values");
    cfg.compare_spec = std::move(spec);
  }

  if (root.contains("validate")) {
    const json& vd = root["validate"];
    reject_unknown(vd, "validate",
                   {"strategy", "arrival_rate", "horizon_arrivals", "warmup_fraction",
                    "batch_count"});
    ValidateSpec spec;
    spec.strategy = parse_strategy(require(vd, "validate", "strategy"), "validate.strategy");
    spec.arrival_rate =
        tagged(require(vd, "validate", "arrival_rate"), "validate.arrival_rate", kRate);
    if (vd.contains("horizon_arrivals")) {
      spec.sim.horizon_arrivals = plain_integer(vd["horizon_arrivals"], "validate.horizon_arrivals");
    }
    if (vd.contains("warmup_fraction")) {
      spec.sim.warmup_fraction = plain_number(vd["warmup_fraction"], "validate.warmup_fraction");
    }
    if (vd.contains("batch_count")) {
      spec.sim.batch_count =
          static_cast<int>(plain_integer(vd["batch_count"], "validate.batch_count"));
    }
    try {
      spec.sim.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("validate: ") + e.what());
    }
    cfg.validate_spec = std::move(spec);
  }

  if (root.contains("calibration")) {
    const json& cl = root["calibration"];
    reject_unknown(cl, "calibration",
                   {"side_length", "travel_speed", "station_counts", "samples_per_count",
                    "metric"});
    RegionSpec region;
    region.side_length =
        tagged(require(cl, "calibration", "side_length"), "calibration.side_length", kLength);
    region.travel_speed =
        tagged(require(cl, "calibration", "travel_speed"), "calibration.travel_speed", kSpeed);
    const json& counts = require(cl, "calibration", "station_counts");
    if (!counts.is_array() || counts.size() < 4) {
      fail("calibration.station_counts", "expected an array of at least 4 station counts");
    }
    for (const auto& c : counts) {
      region.station_counts.push_back(
          static_cast<int>(plain_integer(c, "calibration.station_counts")));
    }
    if (cl.contains("samples_per_count")) {
      region.samples_per_count =
          plain_integer(cl["samples_per_count"], "calibration.samples_per_count");
    }
    if (cl.contains("metric")) {
      const std::string m = cl["metric"].get<std::string>();
      if (m == "euclidean") region.metric = DistanceMetric::kEuclidean;
      else if (m == "manhattan") region.metric = DistanceMetric::kManhattan;
      else fail("calibration.metric", "expected euclidean|manhattan");
    }
    region.seed = cfg.seed;
    try {
      region.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("calibration: ") + e.what());
    }
    cfg.calibration = std::move(region);
  }

  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

}  // namespace amod
