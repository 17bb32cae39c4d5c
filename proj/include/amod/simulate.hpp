#pragma once

#include <cstdint>

#include "amod/plugin_queue.hpp"
#include "amod/swap_station.hpp"

namespace amod {

struct SimConfig {
  long horizon_arrivals = 1000000;  // arrivals to simulate (>= 1e5)
  double warmup_fraction = 0.10;    // discarded head of the run
  std::uint64_t seed = 1;
  int batch_count = 16;             // batch-means batches (>= 10)

  void validate() const;
};

struct SimResult {
  double blocking_estimate = 0.0;
  double blocking_stderr = 0.0;
  double wait_estimate = 0.0;   // hours
  double wait_stderr = 0.0;
  double mean_in_system = 0.0;  // vehicles
  double mean_in_system_stderr = 0.0;
  long events_processed = 0;
};

// Event-driven loss-system simulation: Poisson arrivals, Q exponential
// chargers, capacity V. Blocking is measured per arrival, waits per accepted
// vehicle, occupancy time-averaged; batch means give the standard errors.
SimResult simulate_mmqv(const PluginStationInput& input, const SimConfig& cfg);

// Swap-station simulation with the sampled-chain service discipline the
// analytic model uses: the robot starts at interval boundaries when an EV
// and a full battery are both present, swapped batteries join a charger at
// the interval end, chargers run independent exponential clocks. Occupancy
// and blocking are recorded at interval boundaries; waits follow from the
// occupancy identity, matching the analytic model's semantics.
SimResult simulate_swap_station(const SwapStationInput& input, const SimConfig& cfg);

// Side-by-side report of the analytic chain solution and the simulation.
struct SwapDesComparison {
  SwapSteadyState analytic;
  SimResult empirical;
  double blocking_z = 0.0;  // (analytic - empirical) / stderr
  double wait_z = 0.0;
  double mean_evs_z = 0.0;
};

SwapDesComparison swap_metrics_vs_des(const SwapStationInput& input, long horizon_arrivals,
                                      std::uint64_t seed);

}  // namespace amod
