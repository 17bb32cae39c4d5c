#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amod/market.hpp"

namespace amod {

// Grid-search resolution for both optimization levels. Defaults follow the
// smoothness of the objective: the incumbent-centered windows shrink by
// refine_shrink after every pass.
struct GridSpec {
  int lambda_points = 64;
  int gamma_points = 64;
  int refine_rounds = 3;
  double refine_shrink = 0.25;
  int outer_k_points = 64;
  int outer_q_points = 32;
  int outer_refine_rounds = 2;

  void validate() const;
};

struct OperatingPoint {
  double demand = 0.0;   // lambda*
  double gamma = 0.0;    // gamma*
  double profit = 0.0;
  MarketEquilibrium equilibrium;
};

struct PlanOutcome {
  StationPlan plan;
  MarketEquilibrium equilibrium;
  double profit = 0.0;
  double surplus = 0.0;
  double infra_cost = 0.0;
  double welfare = 0.0;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Platform best response for a fixed plan: grid search over demand x charging
// demand with shrinking refinement windows. The gamma axis is capped at
// min(gamma_zero, smallest gamma at which profit is provably negative), so
// the grid resolves the profitable region. Deterministic for a fixed spec.
// Throws InfeasibleError when no feasible cell exists.
OperatingPoint optimize_operations(const StationPlan& plan, const ModelParams& params,
                                   const GridSpec& grid);

// Welfare-maximizing infrastructure plans. Outer cells are independent and
// evaluated on `threads` workers; the reduction scans results in cell order,
// so parallel and serial runs return identical outcomes. Ties prefer smaller
// K, then smaller Q.
PlanOutcome optimize_plan_plugin(const ModelParams& params, Range k_range, Range q_range,
                                 const GridSpec& grid, int threads = 1);
PlanOutcome optimize_plan_swap(const ModelParams& params, Range k_range,
                               const GridSpec& grid, int threads = 1);

// One parameter sweep row; failed rows carry the error text in `status`.
struct SweepRow {
  double value = 0.0;
  Strategy strategy = Strategy::kPlugIn;
  std::optional<PlanOutcome> outcome;
  std::string status;  // "ok" or failure reason
};

// Names accepted by sweep(): scalar ModelParams fields, e.g. "charge_speed",
// "battery_capacity", "infra_cost_swap", ... When hold_cost_ratio is set, an
// "infra_cost_swap" sweep moves infra_cost_plugin to keep their ratio.
struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
  std::vector<Strategy> strategies;
  bool hold_cost_ratio = false;
};

ModelParams with_parameter(const ModelParams& base, const std::string& name, double value,
                           bool hold_cost_ratio = false);

std::vector<SweepRow> sweep(const SweepSpec& spec, const ModelParams& params,
                            Range k_range, Range q_range, const GridSpec& grid,
                            int threads = 1);

// Welfare difference (swap - plug-in) over a grid of swap infrastructure
// costs (plug-in cost follows at the fixed ratio of the base params) crossed
// with values of a second swept parameter.
struct CompareCell {
  double infra_cost_swap = 0.0;
  double axis_value = 0.0;
  double welfare_swap = 0.0;
  double welfare_plugin = 0.0;
  double delta = 0.0;
  std::string status;
};

std::vector<CompareCell> compare_strategies(const ModelParams& params,
                                            const std::vector<double>& infra_cost_values,
                                            const std::string& axis_parameter,
                                            const std::vector<double>& axis_values,
                                            Range k_range, Range q_range,
                                            const GridSpec& grid, int threads = 1);

}  // namespace amod
