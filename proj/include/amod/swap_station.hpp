#pragma once

#include <Eigen/Dense>

namespace amod {

// One battery-swapping station: an open queue of EVs (buffer V) served by a
// single swap robot with constant service time, coupled to a closed loop of
// Q batteries cycling between Q chargers and a full-battery buffer. The
// station is analyzed as a discrete-time chain sampled every swap_time.
// All times in hours.
struct SwapStationInput {
  double arrival_rate = 0.0;        // EVs per hour at this station
  double swap_time = 0.0;           // constant swap service time t_s
  double battery_charge_time = 0.0; // mean recharge time t_c
  int chargers = 0;                 // Q chargers == Q batteries
  int ev_buffer = 0;                // V parking spots for EVs

  void validate() const;
  int state_count() const { return (ev_buffer + 1) * (chargers + 1); }
  // Row-major index of state (v EVs, q full batteries).
  int state_index(int v, int q) const { return v * (chargers + 1) + q; }
};

struct SwapSteadyState {
  // joint(v, q) = stationary probability of v EVs present and q full batteries
  Eigen::MatrixXd joint;
  double blocking_probability = 0.0;  // station full: sum_q joint(V, q)
  double mean_evs = 0.0;              // mean EVs present per station
  double mean_wait = 0.0;             // hours in queue before the swap starts
};

// Probability of `count` EV arrivals within one service interval.
double arrival_pmf(int count, const SwapStationInput& input);

// Probability that `completed` of the `charging` batteries finish within one
// service interval (independent exponential chargers sampled at t_s).
double charge_completion_pmf(int charging, int completed, const SwapStationInput& input);

// One-step transition matrix of the sampled chain over (v, q) states,
// row-stochastic; rows indexed by state_index(). Throws NumericError if any
// row sum strays from 1 by more than 1e-9.
Eigen::MatrixXd build_transition_kernel(const SwapStationInput& input);

// Stationary distribution of the sampled chain plus the derived station
// metrics. Dense solve up to ~5000 states, power iteration beyond.
SwapSteadyState swap_steady_state(const SwapStationInput& input);

}  // namespace amod
