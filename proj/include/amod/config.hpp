#pragma once

#include <optional>
#include <string>

#include "amod/calibrate.hpp"
#include "amod/market.hpp"
#include "amod/planner.hpp"
#include "amod/simulate.hpp"

namespace amod {

struct CompareSpec {
  std::vector<double> infra_cost_swap_values;
  std::string axis_parameter;
  std::vector<double> axis_values;
};

struct ValidateSpec {
  Strategy strategy = Strategy::kPlugIn;
  double arrival_rate = 0.0;  // per station, per hour
  SimConfig sim;
};

// A fully parsed scenario file. Dimensional fields in the file carry unit
// tags ("16.3 min", "22 kW"); values are converted to the canonical
// hour/kW/kWh/dollar system on load. Unknown keys are rejected.
struct ScenarioConfig {
  ModelParams params;
  std::optional<StationPlan> plan;
  Range k_range{60.0, 450.0};
  Range q_range{2.0, 15.0};
  GridSpec grid;
  std::optional<SweepSpec> sweep_spec;
  std::optional<CompareSpec> compare_spec;
  std::optional<ValidateSpec> validate_spec;
  std::optional<RegionSpec> calibration;
  std::uint64_t seed = 1;

  // Throws ConfigError with the offending field named.
  static ScenarioConfig load(const std::string& path);
  static ScenarioConfig parse(const std::string& json_text);
};

}  // namespace amod
