#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amod/calibrate.hpp"
#include "amod/market.hpp"
#include "amod/planner.hpp"
#include "amod/plugin_queue.hpp"
#include "amod/simulate.hpp"
#include "amod/swap_station.hpp"

namespace py = pybind11;
using namespace amod;

PYBIND11_MODULE(_amod_ev, m) {
  m.doc() = "charging-infrastructure planning for electric robo-taxi fleets";

  py::class_<PluginStationInput>(m, "PluginStationInput")
      .def(py::init<>())
      .def_readwrite("arrival_rate", &PluginStationInput::arrival_rate)
      .def_readwrite("service_time", &PluginStationInput::service_time)
      .def_readwrite("chargers", &PluginStationInput::chargers)
      .def_readwrite("capacity", &PluginStationInput::capacity);

  py::class_<QueueMetrics>(m, "QueueMetrics")
      .def_readonly("state_probabilities", &QueueMetrics::state_probabilities)
      .def_readonly("blocking_probability", &QueueMetrics::blocking_probability)
      .def_readonly("mean_wait", &QueueMetrics::mean_wait)
      .def_readonly("mean_in_system", &QueueMetrics::mean_in_system);

  m.def("mmqv_steady_state", &mmqv_steady_state);
  m.def("mmqv_continuous", &mmqv_continuous);
  m.def("ctmc_oracle", &ctmc_oracle);
  m.def("erlang_b", &erlang_b);
  m.def("regularized_upper_gamma",
        [](double a, double x) { return regularized_upper_gamma(a, x); });

  py::class_<SwapStationInput>(m, "SwapStationInput")
      .def(py::init<>())
      .def_readwrite("arrival_rate", &SwapStationInput::arrival_rate)
      .def_readwrite("swap_time", &SwapStationInput::swap_time)
      .def_readwrite("battery_charge_time", &SwapStationInput::battery_charge_time)
      .def_readwrite("chargers", &SwapStationInput::chargers)
      .def_readwrite("ev_buffer", &SwapStationInput::ev_buffer);

  py::class_<SwapSteadyState>(m, "SwapSteadyState")
      .def_readonly("blocking_probability", &SwapSteadyState::blocking_probability)
      .def_readonly("mean_evs", &SwapSteadyState::mean_evs)
      .def_readonly("mean_wait", &SwapSteadyState::mean_wait)
      .def_property_readonly("joint", [](const SwapSteadyState& s) {
        std::vector<std::vector<double>> out(s.joint.rows());
        for (int v = 0; v < s.joint.rows(); ++v) {
          out[v].assign(s.joint.row(v).begin(), s.joint.row(v).end());
        }
        return out;
      });

  m.def("swap_steady_state", &swap_steady_state);
  m.def("arrival_pmf", &arrival_pmf);
  m.def("charge_completion_pmf", &charge_completion_pmf);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_static("nominal", &ModelParams::nominal)
      .def_readwrite("potential_demand", &ModelParams::potential_demand)
      .def_readwrite("value_of_time", &ModelParams::value_of_time)
      .def_readwrite("trip_duration", &ModelParams::trip_duration)
      .def_readwrite("logit_sensitivity", &ModelParams::logit_sensitivity)
      .def_readwrite("logit_offset", &ModelParams::logit_offset)
      .def_readwrite("arrival_soc", &ModelParams::arrival_soc)
      .def_readwrite("charge_speed", &ModelParams::charge_speed)
      .def_readwrite("battery_capacity", &ModelParams::battery_capacity)
      .def_readwrite("consumption_rate", &ModelParams::consumption_rate)
      .def_readwrite("electricity_price", &ModelParams::electricity_price)
      .def_readwrite("vehicle_cost", &ModelParams::vehicle_cost)
      .def_readwrite("matching_scale_pax", &ModelParams::matching_scale_pax)
      .def_readwrite("matching_scale_chg", &ModelParams::matching_scale_chg)
      .def_readwrite("swap_service_time", &ModelParams::swap_service_time)
      .def_readwrite("swap_chargers", &ModelParams::swap_chargers)
      .def_readwrite("station_capacity", &ModelParams::station_capacity)
      .def_readwrite("infra_cost_plugin", &ModelParams::infra_cost_plugin)
      .def_readwrite("infra_cost_swap", &ModelParams::infra_cost_swap);

  py::enum_<Strategy>(m, "Strategy")
      .value("PLUG_IN", Strategy::kPlugIn)
      .value("SWAP", Strategy::kSwap);

  py::class_<StationPlan>(m, "StationPlan")
      .def_static("plug_in", &StationPlan::plug_in)
      .def_static("swap", &StationPlan::swap)
      .def_readonly("strategy", &StationPlan::strategy)
      .def_readonly("stations", &StationPlan::stations)
      .def_readonly("chargers_per_station", &StationPlan::chargers_per_station)
      .def_readonly("capacity", &StationPlan::capacity);

  py::class_<MarketEquilibrium>(m, "MarketEquilibrium")
      .def_readonly("fare", &MarketEquilibrium::fare)
      .def_readonly("demand", &MarketEquilibrium::demand)
      .def_readonly("charging_rate", &MarketEquilibrium::charging_rate)
      .def_readonly("pax_wait", &MarketEquilibrium::pax_wait)
      .def_readonly("vehicle_idle", &MarketEquilibrium::vehicle_idle)
      .def_readonly("fleet", &MarketEquilibrium::fleet)
      .def_readonly("operating", &MarketEquilibrium::operating)
      .def_readonly("charging_shift", &MarketEquilibrium::charging_shift)
      .def_readonly("searching", &MarketEquilibrium::searching)
      .def_readonly("waiting", &MarketEquilibrium::waiting)
      .def_readonly("in_service", &MarketEquilibrium::in_service)
      .def_readonly("search_time", &MarketEquilibrium::search_time)
      .def_readonly("station_wait", &MarketEquilibrium::station_wait)
      .def_readonly("blocking", &MarketEquilibrium::blocking)
      .def_readonly("travel_cost", &MarketEquilibrium::travel_cost);

  m.def("logit_demand", &logit_demand);
  m.def("inverse_logit", &inverse_logit);
  m.def("consumer_surplus", &consumer_surplus);
  m.def("pax_feasibility_threshold", &pax_feasibility_threshold);
  m.def("solve_pax_times",
        [](double demand, double operating, const ModelParams& p)
            -> std::optional<std::pair<double, double>> {
          const auto t = solve_pax_times(demand, operating, p);
          if (!t) return std::nullopt;
          return std::make_pair(t->pax_wait, t->vehicle_idle);
        });
  m.def("search_time", &search_time);
  m.def("platform_profit", &platform_profit);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("lambda_points", &GridSpec::lambda_points)
      .def_readwrite("gamma_points", &GridSpec::gamma_points)
      .def_readwrite("refine_rounds", &GridSpec::refine_rounds)
      .def_readwrite("refine_shrink", &GridSpec::refine_shrink)
      .def_readwrite("outer_k_points", &GridSpec::outer_k_points)
      .def_readwrite("outer_q_points", &GridSpec::outer_q_points)
      .def_readwrite("outer_refine_rounds", &GridSpec::outer_refine_rounds);

  py::class_<OperatingPoint>(m, "OperatingPoint")
      .def_readonly("demand", &OperatingPoint::demand)
      .def_readonly("gamma", &OperatingPoint::gamma)
      .def_readonly("profit", &OperatingPoint::profit)
      .def_readonly("equilibrium", &OperatingPoint::equilibrium);

  py::class_<PlanOutcome>(m, "PlanOutcome")
      .def_readonly("plan", &PlanOutcome::plan)
      .def_readonly("equilibrium", &PlanOutcome::equilibrium)
      .def_readonly("profit", &PlanOutcome::profit)
      .def_readonly("surplus", &PlanOutcome::surplus)
      .def_readonly("infra_cost", &PlanOutcome::infra_cost)
      .def_readonly("welfare", &PlanOutcome::welfare);

  m.def("optimize_operations", &optimize_operations);
  m.def(
      "optimize_plan_plugin",
      [](const ModelParams& p, std::pair<double, double> k_range,
         std::pair<double, double> q_range, const GridSpec& grid, int threads) {
        return optimize_plan_plugin(p, {k_range.first, k_range.second},
                                    {q_range.first, q_range.second}, grid, threads);
      },
      py::arg("params"), py::arg("k_range"), py::arg("q_range"),
      py::arg("grid") = GridSpec{}, py::arg("threads") = 1);
  m.def(
      "optimize_plan_swap",
      [](const ModelParams& p, std::pair<double, double> k_range, const GridSpec& grid,
         int threads) {
        return optimize_plan_swap(p, {k_range.first, k_range.second}, grid, threads);
      },
      py::arg("params"), py::arg("k_range"), py::arg("grid") = GridSpec{},
      py::arg("threads") = 1);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("horizon_arrivals", &SimConfig::horizon_arrivals)
      .def_readwrite("warmup_fraction", &SimConfig::warmup_fraction)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("batch_count", &SimConfig::batch_count);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("blocking_estimate", &SimResult::blocking_estimate)
      .def_readonly("blocking_stderr", &SimResult::blocking_stderr)
      .def_readonly("wait_estimate", &SimResult::wait_estimate)
      .def_readonly("wait_stderr", &SimResult::wait_stderr)
      .def_readonly("mean_in_system", &SimResult::mean_in_system)
      .def_readonly("mean_in_system_stderr", &SimResult::mean_in_system_stderr)
      .def_readonly("events_processed", &SimResult::events_processed);

  m.def("simulate_mmqv", &simulate_mmqv);
  m.def("simulate_swap_station", &simulate_swap_station);

  py::class_<RegionSpec>(m, "RegionSpec")
      .def(py::init<>())
      .def_readwrite("side_length", &RegionSpec::side_length)
      .def_readwrite("travel_speed", &RegionSpec::travel_speed)
      .def_readwrite("station_counts", &RegionSpec::station_counts)
      .def_readwrite("samples_per_count", &RegionSpec::samples_per_count)
      .def_readwrite("seed", &RegionSpec::seed);

  py::class_<SearchTimePoint>(m, "SearchTimePoint")
      .def_readonly("stations", &SearchTimePoint::stations)
      .def_readonly("mean_time", &SearchTimePoint::mean_time);

  py::class_<SqrtLawFit>(m, "SqrtLawFit")
      .def_readonly("scale", &SqrtLawFit::scale)
      .def_readonly("r_squared", &SqrtLawFit::r_squared)
      .def_readonly("points", &SqrtLawFit::points);

  m.def("simulate_search_times", &simulate_search_times);
  m.def("fit_sqrt_law", &fit_sqrt_law);
}
