#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "amod/errors.hpp"
#include "amod/plugin_queue.hpp"

namespace amod {

// Builds the generator of the birth-death chain state-by-state and solves the
// global balance equations pi * G = 0 with sum(pi) = 1. Deliberately does not
// reuse any of the closed-form machinery it is meant to check.
QueueMetrics ctmc_oracle(const PluginStationInput& input) {
  input.validate();
  if (std::floor(input.chargers) != input.chargers) {
    throw std::invalid_argument("ctmc_oracle: chargers must be integral");
  }
  const int q = static_cast<int>(input.chargers);
  const int n = input.capacity + 1;
  const double birth = input.arrival_rate;
  const double mu = 1.0 / input.service_time;

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < n; ++v) {
    if (v < n - 1) {
      g(v, v + 1) = birth;
      g(v, v) -= birth;
    }
    if (v > 0) {
      const double death = std::min(v, q) * mu;
      g(v, v - 1) = death;
      g(v, v) -= death;
    }
  }

  // pi G = 0  ->  G^T pi = 0; replace the last equation with normalization.
  Eigen::MatrixXd a = g.transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw NumericError("ctmc_oracle: balance equations are singular");
  }
  Eigen::VectorXd pi = lu.solve(b);

  QueueMetrics m;
  m.state_probabilities.assign(pi.data(), pi.data() + n);
  m.blocking_probability = pi(n - 1);
  double mean = 0.0, queued = 0.0;
  for (int v = 0; v < n; ++v) {
    mean += v * pi(v);
    if (v > q) queued += (v - q) * pi(v);
  }
  m.mean_in_system = mean;
  m.mean_wait = birth > 0.0 ? queued / (birth * (1.0 - m.blocking_probability)) : 0.0;
  return m;
}

}  // namespace amod
