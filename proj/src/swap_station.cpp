#include "amod/swap_station.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "amod/errors.hpp"

namespace amod {

void SwapStationInput::validate() const {
  if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate)) {
    throw std::invalid_argument("swap station: arrival_rate must be finite and >= 0");
  }
  if (!(swap_time > 0.0)) throw std::invalid_argument("swap station: swap_time must be positive");
  if (!(battery_charge_time > 0.0)) {
    throw std::invalid_argument("swap station: battery_charge_time must be positive");
  }
  if (chargers < 1) throw std::invalid_argument("swap station: chargers must be >= 1");
  if (ev_buffer < 1) throw std::invalid_argument("swap station: ev_buffer must be >= 1");
}

double arrival_pmf(int count, const SwapStationInput& input) {
  if (count < 0) return 0.0;  // convention: kernel arguments may go negative
  const double mean = input.arrival_rate * input.swap_time;
  if (mean == 0.0) return count == 0 ? 1.0 : 0.0;
  return std::exp(-mean + count * std::log(mean) - std::lgamma(count + 1.0));
}

double charge_completion_pmf(int charging, int completed, const SwapStationInput& input) {
  const int trials = std::min(input.chargers, charging);
  if (completed < 0 || completed > trials) return 0.0;
  const double p = -std::expm1(-input.swap_time / input.battery_charge_time);
  if (p <= 0.0) return completed == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return completed == trials ? 1.0 : 0.0;
  const double log_choose = std::lgamma(trials + 1.0) - std::lgamma(completed + 1.0) -
                            std::lgamma(trials - completed + 1.0);
  return std::exp(log_choose + completed * std::log(p) +
                  (trials - completed) * std::log1p(-p));
}

Eigen::MatrixXd build_transition_kernel(const SwapStationInput& input) {
  input.validate();
  const int q_max = input.chargers;
  const int v_max = input.ev_buffer;
  const int n = input.state_count();

  // g(u) for u = 0..v_max-1 covers every reachable arrival count below the
  // lumped tail; the tail row absorbs the rest.
  std::vector<double> g(static_cast<size_t>(v_max) + 1);
  for (int u = 0; u <= v_max; ++u) g[u] = arrival_pmf(u, input);
  // f(m, k): k of m charging batteries finish within the interval
  Eigen::MatrixXd f(q_max + 1, q_max + 1);
  for (int m = 0; m <= q_max; ++m) {
    for (int k = 0; k <= q_max; ++k) f(m, k) = charge_completion_pmf(m, k, input);
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int v0 = 0; v0 <= v_max; ++v0) {
    for (int q0 = 0; q0 <= q_max; ++q0) {
      const int row = input.state_index(v0, q0);
      const int served = std::min({v0, q0, 1});
      const int charging = q_max - q0;
      double tail = 1.0;
      for (int v1 = 0; v1 < v_max; ++v1) {
        const int arrivals = v1 - v0 + served;
        const double gp = arrivals >= 0 ? g[arrivals] : 0.0;
        tail -= gp;
        if (gp == 0.0) continue;
        for (int q1 = 0; q1 <= q_max; ++q1) {
          const int finished = q1 - q0 + served;
          if (finished < 0 || finished > charging) continue;
          t(row, input.state_index(v1, q1)) += gp * f(charging, finished);
        }
      }
      if (tail < 0.0) tail = 0.0;  // round-off guard; true tail is >= 0
      for (int q1 = 0; q1 <= q_max; ++q1) {
        const int finished = q1 - q0 + served;
        if (finished < 0 || finished > charging) continue;
        t(row, input.state_index(v_max, q1)) += tail * f(charging, finished);
      }
    }
  }

  for (int r = 0; r < n; ++r) {
    const double sum = t.row(r).sum();
    if (std::fabs(sum - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "swap kernel row " << r << " sums to " << sum;
      throw NumericError(msg.str());
    }
  }
  return t;
}

namespace {

Eigen::VectorXd stationary_dense(const Eigen::MatrixXd& t) {
  const int n = static_cast<int>(t.rows());
  // pi (T - I) = 0 with one equation swapped for normalization
  Eigen::MatrixXd a = t.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd pi = lu.solve(b);
  const double residual = (a * pi - b).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > 1e-8) {
    throw NumericError("swap steady state: ill-conditioned linear system");
  }
  return pi;
}

Eigen::VectorXd stationary_power(const Eigen::MatrixXd& t) {
  const int n = static_cast<int>(t.rows());
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (long sweep = 0; sweep < 1000000; ++sweep) {
    Eigen::VectorXd next = t.transpose() * pi;
    next /= next.sum();
    const double delta = (next - pi).cwiseAbs().maxCoeff();
    pi = next;
    if (delta < 1e-12) return pi;
  }
  throw NumericError("swap steady state: power iteration did not converge");
}

}  // namespace

SwapSteadyState swap_steady_state(const SwapStationInput& input) {
  const Eigen::MatrixXd t = build_transition_kernel(input);
  const int n = input.state_count();
  Eigen::VectorXd pi = n <= 5000 ? stationary_dense(t) : stationary_power(t);

  // round-off may leave tiny negative entries; clamp and renormalize
  for (int i = 0; i < n; ++i) {
    if (pi(i) < 0.0) {
      if (pi(i) < -1e-12) throw NumericError("swap steady state: negative probability");
      pi(i) = 0.0;
    }
  }
  pi /= pi.sum();

  SwapSteadyState out;
  out.joint.resize(input.ev_buffer + 1, input.chargers + 1);
  for (int v = 0; v <= input.ev_buffer; ++v) {
    for (int q = 0; q <= input.chargers; ++q) {
      out.joint(v, q) = pi(input.state_index(v, q));
    }
  }
  out.blocking_probability = out.joint.row(input.ev_buffer).sum();
  for (int v = 0; v <= input.ev_buffer; ++v) out.mean_evs += v * out.joint.row(v).sum();

  if (input.arrival_rate > 0.0) {
    const double accepted = input.arrival_rate * (1.0 - out.blocking_probability);
    double wait = out.mean_evs / accepted - input.swap_time;
    if (wait < 0.0) {
      if (wait <= -1e-9) throw NumericError("swap steady state: wait below round-off band");
      wait = 0.0;
    }
    out.mean_wait = wait;
  }
  return out;
}

}  // namespace amod
