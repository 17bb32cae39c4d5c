#include "amod/plugin_queue.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "amod/specfun.hpp"

namespace amod {

void PluginStationInput::validate() const {
  if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate)) {
    throw std::invalid_argument("plugin queue: arrival_rate must be finite and >= 0");
  }
  if (!(service_time > 0.0) || !std::isfinite(service_time)) {
    throw std::invalid_argument("plugin queue: service_time must be positive");
  }
  if (!(chargers > 0.0)) throw std::invalid_argument("plugin queue: chargers must be positive");
  if (capacity < 1) throw std::invalid_argument("plugin queue: capacity must be >= 1");
  if (static_cast<double>(capacity) < std::ceil(chargers)) {
    throw std::invalid_argument("plugin queue: capacity must be >= ceil(chargers)");
  }
}

namespace {

QueueMetrics empty_system(const PluginStationInput& input, bool with_distribution) {
  QueueMetrics m;
  if (with_distribution) {
    m.state_probabilities.assign(static_cast<size_t>(input.capacity) + 1, 0.0);
    m.state_probabilities[0] = 1.0;
  }
  return m;
}

}  // namespace

QueueMetrics mmqv_steady_state(const PluginStationInput& input) {
  input.validate();
  if (std::floor(input.chargers) != input.chargers) {
    throw std::invalid_argument("mmqv_steady_state: chargers must be integral");
  }
  const int q = static_cast<int>(input.chargers);
  const int cap = input.capacity;
  const double rho = input.offered_load();
  if (rho == 0.0) return empty_system(input, true);

  // log-weights of the unnormalized stationary measure
  const double log_rho = std::log(rho);
  const double log_q = std::log(static_cast<double>(q));
  std::vector<double> lw(static_cast<size_t>(cap) + 1);
  for (int v = 0; v <= cap; ++v) {
    if (v <= q) {
      lw[v] = v * log_rho - std::lgamma(v + 1.0);
    } else {
      lw[v] = v * log_rho - (v - q) * log_q - std::lgamma(q + 1.0);
    }
  }
  double lz = -std::numeric_limits<double>::infinity();
  for (double w : lw) lz = log_sum_exp(lz, w);

  QueueMetrics m;
  m.state_probabilities.resize(lw.size());
  double mean = 0.0, queued = 0.0;
  for (int v = 0; v <= cap; ++v) {
    const double p = std::exp(lw[v] - lz);
    m.state_probabilities[v] = p;
    mean += v * p;
    if (v > q) queued += (v - q) * p;
  }
  m.blocking_probability = m.state_probabilities[cap];
  m.mean_in_system = mean;
  m.mean_wait = queued / (input.arrival_rate * (1.0 - m.blocking_probability));
  return m;
}

QueueMetrics mmqv_continuous(const PluginStationInput& input) {
  input.validate();
  const double q = input.chargers;
  const double cap = static_cast<double>(input.capacity);
  const double rho = input.offered_load();
  if (rho == 0.0) return empty_system(input, false);

  const double a = rho / q;       // per-charger load
  const double m = cap - q;       // continued queue length, real >= 0
  const double w = std::log(a);
  const double log_rho = std::log(rho);
  const double lg_q1 = std::lgamma(q + 1.0);

  // normalizer: e^rho * Q(q,rho) continues sum_{v<q} rho^v/v!,
  // rho^q/Gamma(q+1) * geom(a, m) continues sum_{v=q..V} rho^v/(q^{v-q} q!)
  const double head = rho + log_regularized_upper_gamma(q, rho);
  const double tail = q * log_rho - lg_q1 + log_geom_sum(w, m);
  const double log_z = log_sum_exp(head, tail);

  QueueMetrics out;
  out.blocking_probability =
      std::exp(cap * log_rho - lg_q1 - m * std::log(q) - log_z);
  const double log_queued = q * log_rho - lg_q1 + log_weighted_geom_sum(w, m) - log_z;
  const double queued = std::exp(log_queued);
  out.mean_wait = queued / (input.arrival_rate * (1.0 - out.blocking_probability));
  out.mean_in_system = input.arrival_rate * (1.0 - out.blocking_probability) *
                       (out.mean_wait + input.service_time);
  return out;
}

double erlang_b(double offered_load, int servers) {
  if (offered_load < 0.0 || servers < 0) {
    throw std::invalid_argument("erlang_b: bad arguments");
  }
  double b = 1.0;
  for (int k = 1; k <= servers; ++k) {
    b = offered_load * b / (k + offered_load * b);
  }
  return b;
}

}  // namespace amod
