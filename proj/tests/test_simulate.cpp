#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "amod/rng.hpp"
#include "amod/simulate.hpp"

using namespace amod;

namespace {

PluginStationInput plugin_station(double lam, double ts, int q, int v) {
  PluginStationInput in;
  in.arrival_rate = lam;
  in.service_time = ts;
  in.chargers = q;
  in.capacity = v;
  return in;
}

SwapStationInput swap_station_nominal() {
  SwapStationInput in;
  in.arrival_rate = 821.533395538942 / 216.503524780273;
  in.swap_time = 2.0 / 60.0;
  in.battery_charge_time = 0.9 * 25.0 / 22.22;
  in.chargers = 6;
  in.ev_buffer = 15;
  return in;
}

SimConfig quick_cfg(std::uint64_t seed) {
  SimConfig cfg;
  cfg.horizon_arrivals = 200000;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a(42, 0), b(42, 0), c(42, 1);
  CHECK(a.next_u64() == b.next_u64());
  Rng a2(42, 0);
  CHECK(a2.next_u64() != c.next_u64());
  // uniform sanity
  Rng u(7, 3);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) mean += u.next_double();
  CHECK(mean / 20000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("poisson and exponential sampling moments") {
  Rng r(123, 9);
  for (double mean : {0.13, 2.0, 45.0, 300.0}) {
    double acc = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) acc += r.poisson(mean);
    CHECK(acc / n == doctest::Approx(mean).epsilon(0.05));
  }
  double acc = 0.0;
  for (int i = 0; i < 40000; ++i) acc += r.exponential(2.5);
  CHECK(acc / 40000 == doctest::Approx(2.5).epsilon(0.05));
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.horizon_arrivals = 10;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.batch_count = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.warmup_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("loss-system simulation reproduces the analytic queue") {
  const PluginStationInput in = plugin_station(2.0, 1.0, 2, 4);  // rho = 2
  const QueueMetrics analytic = mmqv_steady_state(in);
  SimConfig cfg;
  cfg.horizon_arrivals = 1000000;
  cfg.seed = 2024;
  const SimResult sim = simulate_mmqv(in, cfg);
  CHECK(std::fabs(sim.blocking_estimate - analytic.blocking_probability) <=
        3.0 * sim.blocking_stderr);
  CHECK(std::fabs(sim.wait_estimate - analytic.mean_wait) <= 3.0 * sim.wait_stderr);
  CHECK(std::fabs(sim.mean_in_system - analytic.mean_in_system) <=
        3.0 * sim.mean_in_system_stderr);
}

TEST_CASE("pure loss simulation matches the Erlang-B value") {
  const PluginStationInput in = plugin_station(3.0, 1.0, 3, 3);
  SimConfig cfg;
  cfg.horizon_arrivals = 400000;
  cfg.seed = 5;
  const SimResult sim = simulate_mmqv(in, cfg);
  CHECK(std::fabs(sim.blocking_estimate - erlang_b(3.0, 3)) <= 3.0 * sim.blocking_stderr);
  CHECK(sim.wait_estimate == 0.0);
}

TEST_CASE("same seed, same result; different seed, different sample path") {
  const PluginStationInput in = plugin_station(2.0, 1.0, 2, 4);
  const SimResult a = simulate_mmqv(in, quick_cfg(9));
  const SimResult b = simulate_mmqv(in, quick_cfg(9));
  CHECK(a.blocking_estimate == b.blocking_estimate);
  CHECK(a.wait_estimate == b.wait_estimate);
  const SimResult c = simulate_mmqv(in, quick_cfg(10));
  CHECK(a.blocking_estimate != c.blocking_estimate);
}

TEST_CASE("swap simulation agrees with the chain solution at the nominal point") {
  const SwapStationInput in = swap_station_nominal();
  const SwapDesComparison cmp = swap_metrics_vs_des(in, 1000000, 31);
  CHECK(std::fabs(cmp.blocking_z) <= 3.0);
  CHECK(std::fabs(cmp.wait_z) <= 3.0);
  CHECK(std::fabs(cmp.mean_evs_z) <= 3.0);
}

TEST_CASE("idle swap station ends with every battery full") {
  SwapStationInput in = swap_station_nominal();
  in.arrival_rate = 1e-7;
  SimConfig cfg;
  cfg.horizon_arrivals = 100000;
  cfg.seed = 3;
  const SimResult sim = simulate_swap_station(in, cfg);
  CHECK(sim.blocking_estimate == 0.0);
  CHECK(sim.wait_estimate == 0.0);
  CHECK(sim.mean_in_system == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("confidence intervals cover the analytic values across seeds") {
  // 95% t-intervals from 16 batch means should cover the truth in the vast
  // majority of runs; the seed list is fixed so the outcome is reproducible.
  const PluginStationInput in = plugin_station(2.0, 1.0, 2, 4);
  const QueueMetrics analytic = mmqv_steady_state(in);
  const double t_crit = 2.131;  // t(15, 0.975)
  int cover_block = 0, cover_wait = 0;
  const int runs = 50;
  for (int seed = 1; seed <= runs; ++seed) {
    SimConfig cfg;
    cfg.horizon_arrivals = 100000;
    cfg.seed = static_cast<std::uint64_t>(seed);
    const SimResult sim = simulate_mmqv(in, cfg);
    if (std::fabs(sim.blocking_estimate - analytic.blocking_probability) <=
        t_crit * sim.blocking_stderr) {
      ++cover_block;
    }
    if (std::fabs(sim.wait_estimate - analytic.mean_wait) <= t_crit * sim.wait_stderr) {
      ++cover_wait;
    }
  }
  CHECK(cover_block >= 45);
  CHECK(cover_wait >= 45);
}
