#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "amod/config.hpp"
#include "amod/errors.hpp"
#include "amod/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kInfeasible = 3;
constexpr int kNumericFailure = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "scenario config file")->required();
  cmd->add_option("--out", opts.out_dir, "directory for result files");
  cmd->add_option("--seed", opts.seed, "override the config seed");
  cmd->add_option("--threads", opts.threads, "worker threads for outer grid cells")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", opts.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw amod::ConfigError("cannot write " + path.string());
  out << body;
}

amod::ScenarioConfig load_config(const CommonOpts& opts) {
  amod::ScenarioConfig cfg = amod::ScenarioConfig::load(opts.config_path);
  if (opts.seed) {
    cfg.seed = *opts.seed;
    if (cfg.calibration) cfg.calibration->seed = *opts.seed;
  }
  return cfg;
}

int cmd_solve(const CommonOpts& opts) {
  const amod::ScenarioConfig cfg = load_config(opts);
  if (!cfg.plan) throw amod::ConfigError("solve: config needs a \"plan\" section");
  const amod::OperatingPoint op =
      amod::optimize_operations(*cfg.plan, cfg.params, cfg.grid);
  const amod::WelfareBreakdown w =
      amod::social_welfare(op.equilibrium, *cfg.plan, cfg.params);
  std::cout << "strategy " << amod::to_string(cfg.plan->strategy) << "\n"
            << amod::equilibrium_text(op.equilibrium, w);
  write_file(opts.out_dir, "solve.json", amod::solve_json(*cfg.plan, op.equilibrium, w));
  return kOk;
}

int cmd_plan(const CommonOpts& opts) {
  const amod::ScenarioConfig cfg = load_config(opts);
  if (!cfg.plan) throw amod::ConfigError("plan: config needs a \"plan\" section naming the strategy");
  amod::PlanOutcome outcome;
  if (cfg.plan->strategy == amod::Strategy::kPlugIn) {
    outcome = amod::optimize_plan_plugin(cfg.params, cfg.k_range, cfg.q_range, cfg.grid,
                                         opts.threads);
  } else {
    outcome = amod::optimize_plan_swap(cfg.params, cfg.k_range, cfg.grid, opts.threads);
  }
  std::cout << amod::plan_text(outcome);
  write_file(opts.out_dir, "plan.json", amod::plan_json(outcome));
  return kOk;
}

int cmd_sweep(const CommonOpts& opts) {
  const amod::ScenarioConfig cfg = load_config(opts);
  if (!cfg.sweep_spec) throw amod::ConfigError("sweep: config needs a \"sweep\" section");
  const std::vector<amod::SweepRow> rows = amod::sweep(
      *cfg.sweep_spec, cfg.params, cfg.k_range, cfg.q_range, cfg.grid, opts.threads);
  const std::string csv = amod::sweep_csv(rows, cfg.sweep_spec->parameter);
  std::cout << csv;
  write_file(opts.out_dir, "sweep.csv", csv);
  return kOk;
}

int cmd_compare(const CommonOpts& opts) {
  const amod::ScenarioConfig cfg = load_config(opts);
  if (!cfg.compare_spec) throw amod::ConfigError("compare: config needs a \"compare\" section");
  const std::vector<amod::CompareCell> cells = amod::compare_strategies(
      cfg.params, cfg.compare_spec->infra_cost_swap_values, cfg.compare_spec->axis_parameter,
      cfg.compare_spec->axis_values, cfg.k_range, cfg.q_range, cfg.grid, opts.threads);
  const std::string csv = amod::compare_csv(cells, cfg.compare_spec->axis_parameter);
  std::cout << csv;
  write_file(opts.out_dir, "compare.csv", csv);
  return kOk;
}

int cmd_validate(const CommonOpts& opts) {
  amod::ScenarioConfig cfg = load_config(opts);
  if (!cfg.validate_spec) throw amod::ConfigError("validate: config needs a \"validate\" section");
  amod::ValidateSpec spec = *cfg.validate_spec;
  spec.sim.seed = cfg.seed;

  double analytic_blocking = 0.0, analytic_wait = 0.0, analytic_mean = 0.0;
  amod::SimResult sim;
  if (spec.strategy == amod::Strategy::kPlugIn) {
    if (!cfg.plan || cfg.plan->strategy != amod::Strategy::kPlugIn) {
      throw amod::ConfigError("validate: plugin validation needs a plugin \"plan\"");
    }
    amod::PluginStationInput station;
    station.arrival_rate = spec.arrival_rate;
    station.service_time = cfg.params.charge_duration();
    station.chargers = cfg.plan->chargers_per_station;
    station.capacity = cfg.plan->capacity;
    const amod::QueueMetrics analytic = amod::mmqv_steady_state(station);
    analytic_blocking = analytic.blocking_probability;
    analytic_wait = analytic.mean_wait;
    analytic_mean = analytic.mean_in_system;
    sim = amod::simulate_mmqv(station, spec.sim);
  } else {
    amod::SwapStationInput station;
    station.arrival_rate = spec.arrival_rate;
    station.swap_time = cfg.params.swap_service_time;
    station.battery_charge_time = cfg.params.charge_duration();
    station.chargers = cfg.params.swap_chargers;
    station.ev_buffer = cfg.params.station_capacity;
    const amod::SwapSteadyState analytic = amod::swap_steady_state(station);
    analytic_blocking = analytic.blocking_probability;
    analytic_wait = analytic.mean_wait;
    analytic_mean = analytic.mean_evs;
    sim = amod::simulate_swap_station(station, spec.sim);
  }
  const std::string body =
      amod::validation_json(sim, analytic_blocking, analytic_wait, analytic_mean);
  std::cout << body;
  write_file(opts.out_dir, "validate.json", body);
  return kOk;
}

int cmd_calibrate(const CommonOpts& opts) {
  const amod::ScenarioConfig cfg = load_config(opts);
  if (!cfg.calibration) throw amod::ConfigError("calibrate: config needs a \"calibration\" section");
  const std::vector<amod::SearchTimePoint> points =
      amod::simulate_search_times(*cfg.calibration);
  const amod::SqrtLawFit fit = amod::fit_sqrt_law(points);
  if (opts.format == "json") {
    const std::string body = amod::calibration_json(fit);
    std::cout << body;
    write_file(opts.out_dir, "calibrate.json", body);
  } else {
    const std::string body = amod::calibration_csv(fit);
    std::cout << body << "scale " << amod::format_double(fit.scale) << "\nr_squared "
              << amod::format_double(fit.r_squared) << "\n";
    write_file(opts.out_dir, "calibrate.csv", body);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"charging infrastructure planning for electric robo-taxi fleets"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto* solve = app.add_subcommand("solve", "market equilibrium for a fixed plan");
  auto* plan = app.add_subcommand("plan", "welfare-maximizing infrastructure plan");
  auto* sweep = app.add_subcommand("sweep", "plan across a parameter range");
  auto* compare = app.add_subcommand("compare", "swap vs plug-in welfare difference");
  auto* validate = app.add_subcommand("validate", "simulation check of the station models");
  auto* calibrate = app.add_subcommand("calibrate", "fit the square-root search-time law");
  for (CLI::App* cmd : {solve, plan, sweep, compare, validate, calibrate}) {
    add_common(cmd, opts);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (solve->parsed()) return cmd_solve(opts);
    if (plan->parsed()) return cmd_plan(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
    if (compare->parsed()) return cmd_compare(opts);
    if (validate->parsed()) return cmd_validate(opts);
    if (calibrate->parsed()) return cmd_calibrate(opts);
  } catch (const amod::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const amod::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const amod::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
