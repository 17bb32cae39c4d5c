#pragma once

#include <vector>

namespace amod {

// One plug-in charging station: Poisson arrivals, exponential charging on Q
// parallel chargers, total room for V vehicles (charging + waiting); arrivals
// finding V vehicles present are lost. All times in hours.
struct PluginStationInput {
  double arrival_rate = 0.0;   // vehicles per hour at this station
  double service_time = 0.0;   // mean charging time, hours
  double chargers = 0.0;       // Q; may be non-integral for the continued form
  int capacity = 0;            // V >= ceil(Q)

  // Offered load and per-charger load.
  double offered_load() const { return arrival_rate * service_time; }
  double per_charger_load() const { return offered_load() / chargers; }

  // Throws std::invalid_argument on violated invariants.
  void validate() const;
};

struct QueueMetrics {
  // P_0..P_V; empty for the continued (non-integral Q) form.
  std::vector<double> state_probabilities;
  double blocking_probability = 0.0;  // P_V in [0,1)
  double mean_wait = 0.0;             // time in queue before charging, hours
  double mean_in_system = 0.0;        // vehicles present (waiting + charging)
};

// Steady state of the finite-capacity multi-server queue, integral Q.
// Weights are accumulated in log space so large V and loads stay finite.
QueueMetrics mmqv_steady_state(const PluginStationInput& input);

// Same metrics with the factorials and finite sums continued to real Q > 0
// via the gamma function. Agrees with mmqv_steady_state at integral Q to
// ~1e-12 relative; state_probabilities is left empty.
QueueMetrics mmqv_continuous(const PluginStationInput& input);

// Independent validation oracle: assembles the (V+1)-state birth-death
// balance equations directly and solves them numerically. Shares no code
// with mmqv_steady_state. Intended for tests and the validate command.
QueueMetrics ctmc_oracle(const PluginStationInput& input);

// Classic Erlang-B recursion for a pure loss system (V == Q), used as a
// second oracle in tests.
double erlang_b(double offered_load, int servers);

}  // namespace amod
