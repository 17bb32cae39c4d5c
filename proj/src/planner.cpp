#include "amod/planner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "amod/errors.hpp"

namespace amod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest hourly revenue the demand curve can produce, maximized over the
// demand level by golden section.
double revenue_ceiling(const ModelParams& p) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  auto rev = [&](double lam) { return lam * inverse_logit(lam, p); };
  double a = 1e-9 * p.potential_demand, b = (1.0 - 1e-9) * p.potential_demand;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = rev(c1), f2 = rev(c2);
  for (int i = 0; i < 300 && b - a > 1e-10 * p.potential_demand; ++i) {
    if (f1 > f2) {
      b = c2; c2 = c1; f2 = f1; c1 = b - gr * (b - a); f1 = rev(c1);
    } else {
      a = c1; c1 = c2; f1 = f2; c2 = a + gr * (b - a); f2 = rev(c2);
    }
  }
  return rev(0.5 * (a + b));
}

// Charging demand beyond which profit is negative no matter the fare: fleet
// and electricity costs alone exceed any possible revenue. Keeps the search
// box at the scale of the profitable region instead of gamma_zero, which for
// realistic parameters sits orders of magnitude higher.
double gamma_econ_cap(const ModelParams& p) {
  const double energy = (1.0 - p.arrival_soc) * p.battery_capacity;
  return revenue_ceiling(p) /
         (energy * (p.electricity_price + p.vehicle_cost / p.consumption_rate));
}

struct InnerBest {
  double profit = -kInf;
  double demand = 0.0;
  double gamma = 0.0;
  bool found = false;
};

InnerBest inner_search(const StationAnalytics& sa, const ModelParams& p,
                       const GridSpec& grid, double gamma_cap) {
  InnerBest best;
  const double a2 = p.matching_scale_pax * p.matching_scale_pax;
  const double energy_price =
      (1.0 - p.arrival_soc) * p.battery_capacity * p.electricity_price;
  double lam_lo = 0.0, lam_hi = p.potential_demand;
  double gam_lo = 0.0, gam_hi = gamma_cap;
  std::vector<double> lams(grid.lambda_points), finv(grid.lambda_points),
      thresholds(grid.lambda_points);
  for (int round = 0; round <= grid.refine_rounds; ++round) {
    for (int li = 0; li < grid.lambda_points; ++li) {
      lams[li] = lam_lo + (li + 0.5) * (lam_hi - lam_lo) / grid.lambda_points;
      finv[li] = inverse_logit(lams[li], p);
      thresholds[li] = pax_feasibility_threshold(lams[li], p);
    }
    for (int gi = 0; gi < grid.gamma_points; ++gi) {
      const double gamma = gam_lo + (gi + 0.5) * (gam_hi - gam_lo) / grid.gamma_points;
      const FleetState f = sa.fleet_from_gamma(gamma);
      if (!(f.operating > 0.0)) continue;
      const double fixed_cost = gamma * energy_price + f.fleet * p.vehicle_cost;
      for (int li = 0; li < grid.lambda_points; ++li) {
        if (f.operating < thresholds[li]) continue;
        const double wait = detail::pax_wait_root(
            lams[li], f.operating - lams[li] * p.trip_duration, a2);
        const double profit =
            lams[li] * (finv[li] - p.value_of_time * wait) - fixed_cost;
        if (profit > best.profit) {
          best = {profit, lams[li], gamma, true};
        }
      }
    }
    if (!best.found) return best;
    const double wl = (lam_hi - lam_lo) * grid.refine_shrink;
    const double wg = (gam_hi - gam_lo) * grid.refine_shrink;
    lam_lo = std::max(0.0, best.demand - wl / 2);
    lam_hi = std::min(p.potential_demand, best.demand + wl / 2);
    gam_lo = std::max(0.0, best.gamma - wg / 2);
    gam_hi = std::min(gamma_cap, best.gamma + wg / 2);
  }
  return best;
}

double plan_gamma_cap(const StationAnalytics& sa, const ModelParams& p) {
  const double econ = gamma_econ_cap(p);
  // gamma_zero usually sits far beyond the economic cap; only bisect for it
  // when the cap itself is already infeasible for the fleet.
  const double target = 1.0 - p.min_station_bound() / sa.plan().stations;
  if (sa.blocking_and_wait(econ).first < target) return econ;
  return std::min(econ, sa.gamma_domain().gamma_zero);
}

struct OuterResult {
  bool feasible = false;
  double welfare = -kInf;
  double k = 0.0;
  double q = 0.0;
  InnerBest inner;
  double surplus = 0.0;
};

// Strict dominance with deterministic tie-breaks: higher welfare, then
// smaller K, then smaller Q.
bool dominates(const OuterResult& a, const OuterResult& b) {
  if (!a.feasible) return false;
  if (!b.feasible) return true;
  if (a.welfare != b.welfare) return a.welfare > b.welfare;
  if (a.k != b.k) return a.k < b.k;
  return a.q < b.q;
}

// Evaluates one outer cell; infeasible cells come back with feasible=false.
OuterResult eval_outer_cell(Strategy strategy, double k, double q,
                            const ModelParams& p, const GridSpec& grid) {
  OuterResult r;
  r.k = k;
  r.q = q;
  if (k <= p.min_station_bound()) return r;
  if (strategy == Strategy::kPlugIn &&
      static_cast<double>(p.station_capacity) < std::ceil(q)) {
    return r;
  }
  const StationPlan plan = strategy == Strategy::kPlugIn
                               ? StationPlan::plug_in(k, q, p)
                               : StationPlan::swap(k, p);
  const StationAnalytics sa(plan, p);
  const InnerBest best = inner_search(sa, p, grid, plan_gamma_cap(sa, p));
  if (!best.found) return r;
  r.feasible = true;
  r.inner = best;
  r.surplus = consumer_surplus(inverse_logit(best.demand, p), p);
  r.welfare = r.surplus + best.profit - plan.infra_cost(p);
  return r;
}

// Runs cells on `threads` workers and reduces in cell order, so the outcome
// is independent of scheduling. Ties prefer smaller K, then smaller Q.
template <typename CellFn>
OuterResult map_reduce_cells(const std::vector<std::pair<double, double>>& cells,
                             int threads, CellFn&& fn) {
  std::vector<OuterResult> results(cells.size());
  if (threads <= 1) {
    for (size_t i = 0; i < cells.size(); ++i) results[i] = fn(cells[i]);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
        results[i] = fn(cells[i]);
      }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, static_cast<int>(cells.size()));
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  OuterResult best;
  for (const OuterResult& r : results) {
    if (dominates(r, best)) best = r;
  }
  return best;
}

PlanOutcome assemble_outcome(Strategy strategy, const OuterResult& r,
                             const ModelParams& p) {
  const StationPlan plan = strategy == Strategy::kPlugIn
                               ? StationPlan::plug_in(r.k, r.q, p)
                               : StationPlan::swap(r.k, p);
  const StationAnalytics sa(plan, p);
  PlanOutcome out;
  out.plan = plan;
  out.equilibrium = sa.equilibrium(r.inner.demand, r.inner.gamma);
  const WelfareBreakdown w = social_welfare(out.equilibrium, plan, p);
  out.profit = w.profit;
  out.surplus = w.surplus;
  out.infra_cost = w.infra_cost;
  out.welfare = w.welfare;
  return out;
}

void check_range(const Range& r, const char* name) {
  if (!(r.lo > 0.0) || !(r.hi > r.lo)) {
    throw std::invalid_argument(std::string(name) + ": need 0 < lo < hi");
  }
}

}  // namespace

void GridSpec::validate() const {
  if (lambda_points < 16 || gamma_points < 16) {
    throw std::invalid_argument("grid: inner axes need at least 16 points");
  }
  if (refine_rounds < 0 || outer_refine_rounds < 0) {
    throw std::invalid_argument("grid: refinement rounds must be >= 0");
  }
  if (!(refine_shrink > 0.0 && refine_shrink < 1.0)) {
    throw std::invalid_argument("grid: refine_shrink must lie in (0,1)");
  }
  if (outer_k_points < 2 || outer_q_points < 2) {
    throw std::invalid_argument("grid: outer axes need at least 2 points");
  }
}

OperatingPoint optimize_operations(const StationPlan& plan, const ModelParams& params,
                                   const GridSpec& grid) {
  grid.validate();
  const StationAnalytics sa(plan, params);
  if (!sa.plan_feasible()) {
    throw InfeasibleError("optimize_operations: plan fails the feasibility conditions");
  }
  const InnerBest best = inner_search(sa, params, grid, plan_gamma_cap(sa, params));
  if (!best.found) {
    throw InfeasibleError("optimize_operations: no feasible operating point on the grid");
  }
  OperatingPoint out;
  out.demand = best.demand;
  out.gamma = best.gamma;
  out.profit = best.profit;
  out.equilibrium = sa.equilibrium(best.demand, best.gamma);
  return out;
}

namespace {

PlanOutcome optimize_plan(Strategy strategy, const ModelParams& params, Range k_range,
                          Range q_range, const GridSpec& grid, int threads) {
  grid.validate();
  params.validate();
  check_range(k_range, "k_range");
  const bool two_dim = strategy == Strategy::kPlugIn;
  if (two_dim) check_range(q_range, "q_range");
  if (k_range.hi <= params.min_station_bound()) {
    throw InfeasibleError("optimize_plan: station range below the minimum bound");
  }

  double k_lo = k_range.lo, k_hi = k_range.hi;
  double q_lo = q_range.lo, q_hi = q_range.hi;
  OuterResult incumbent;
  for (int round = 0; round <= grid.outer_refine_rounds; ++round) {
    std::vector<std::pair<double, double>> cells;
    for (int ki = 0; ki < grid.outer_k_points; ++ki) {
      const double k = k_lo + (ki + 0.5) * (k_hi - k_lo) / grid.outer_k_points;
      if (two_dim) {
        for (int qi = 0; qi < grid.outer_q_points; ++qi) {
          const double q = q_lo + (qi + 0.5) * (q_hi - q_lo) / grid.outer_q_points;
          cells.emplace_back(k, q);
        }
      } else {
        cells.emplace_back(k, static_cast<double>(params.swap_chargers));
      }
    }
    const OuterResult round_best = map_reduce_cells(
        cells, threads, [&](const std::pair<double, double>& cell) {
          return eval_outer_cell(strategy, cell.first, cell.second, params, grid);
        });
    if (dominates(round_best, incumbent)) incumbent = round_best;
    if (!incumbent.feasible) {
      throw InfeasibleError("optimize_plan: no feasible plan in the search range");
    }
    const double wk = (k_hi - k_lo) * grid.refine_shrink;
    k_lo = std::max(k_range.lo, incumbent.k - wk / 2);
    k_hi = std::min(k_range.hi, incumbent.k + wk / 2);
    if (two_dim) {
      const double wq = (q_hi - q_lo) * grid.refine_shrink;
      q_lo = std::max(q_range.lo, incumbent.q - wq / 2);
      q_hi = std::min(q_range.hi, incumbent.q + wq / 2);
    }
  }
  return assemble_outcome(strategy, incumbent, params);
}

}  // namespace

PlanOutcome optimize_plan_plugin(const ModelParams& params, Range k_range, Range q_range,
                                 const GridSpec& grid, int threads) {
  return optimize_plan(Strategy::kPlugIn, params, k_range, q_range, grid, threads);
}

PlanOutcome optimize_plan_swap(const ModelParams& params, Range k_range,
                               const GridSpec& grid, int threads) {
  return optimize_plan(Strategy::kSwap, params, k_range, {1.0, 2.0}, grid, threads);
}

ModelParams with_parameter(const ModelParams& base, const std::string& name, double value,
                           bool hold_cost_ratio) {
  ModelParams p = base;
  if (name == "charge_speed") p.charge_speed = value;
  else if (name == "battery_capacity") p.battery_capacity = value;
  else if (name == "potential_demand") p.potential_demand = value;
  else if (name == "value_of_time") p.value_of_time = value;
  else if (name == "trip_duration") p.trip_duration = value;
  else if (name == "logit_sensitivity") p.logit_sensitivity = value;
  else if (name == "logit_offset") p.logit_offset = value;
  else if (name == "arrival_soc") p.arrival_soc = value;
  else if (name == "consumption_rate") p.consumption_rate = value;
  else if (name == "electricity_price") p.electricity_price = value;
  else if (name == "vehicle_cost") p.vehicle_cost = value;
  else if (name == "matching_scale_pax") p.matching_scale_pax = value;
  else if (name == "matching_scale_chg") p.matching_scale_chg = value;
  else if (name == "swap_service_time") p.swap_service_time = value;
  else if (name == "infra_cost_plugin") p.infra_cost_plugin = value;
  else if (name == "infra_cost_swap") {
    if (hold_cost_ratio) {
      const double ratio = base.infra_cost_swap / base.infra_cost_plugin;
      p.infra_cost_plugin = value / ratio;
    }
    p.infra_cost_swap = value;
  } else {
    throw std::invalid_argument("sweep: unknown parameter '" + name + "'");
  }
  p.validate();
  return p;
}

std::vector<SweepRow> sweep(const SweepSpec& spec, const ModelParams& params,
                            Range k_range, Range q_range, const GridSpec& grid,
                            int threads) {
  if (spec.strategies.empty()) {
    throw std::invalid_argument("sweep: at least one strategy required");
  }
  std::vector<SweepRow> rows;
  for (double value : spec.values) {
    for (Strategy strategy : spec.strategies) {
      SweepRow row;
      row.value = value;
      row.strategy = strategy;
      try {
        const ModelParams p =
            with_parameter(params, spec.parameter, value, spec.hold_cost_ratio);
        row.outcome = strategy == Strategy::kPlugIn
                          ? optimize_plan_plugin(p, k_range, q_range, grid, threads)
                          : optimize_plan_swap(p, k_range, grid, threads);
        row.status = "ok";
      } catch (const std::exception& e) {
        row.status = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<CompareCell> compare_strategies(const ModelParams& params,
                                            const std::vector<double>& infra_cost_values,
                                            const std::string& axis_parameter,
                                            const std::vector<double>& axis_values,
                                            Range k_range, Range q_range,
                                            const GridSpec& grid, int threads) {
  std::vector<CompareCell> cells;
  for (double phi : infra_cost_values) {
    for (double axis : axis_values) {
      CompareCell cell;
      cell.infra_cost_swap = phi;
      cell.axis_value = axis;
      try {
        ModelParams p = with_parameter(params, "infra_cost_swap", phi, true);
        p = with_parameter(p, axis_parameter, axis);
        const PlanOutcome plug = optimize_plan_plugin(p, k_range, q_range, grid, threads);
        const PlanOutcome swp = optimize_plan_swap(p, k_range, grid, threads);
        cell.welfare_plugin = plug.welfare;
        cell.welfare_swap = swp.welfare;
        cell.delta = swp.welfare - plug.welfare;
        cell.status = "ok";
      } catch (const std::exception& e) {
        cell.status = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace amod
