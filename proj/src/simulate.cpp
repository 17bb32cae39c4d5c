#include "amod/simulate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "amod/errors.hpp"
#include "amod/rng.hpp"

namespace amod {

void SimConfig::validate() const {
  if (horizon_arrivals < 100000) {
    throw std::invalid_argument("sim: horizon_arrivals must be >= 1e5");
  }
  if (!(warmup_fraction > 0.0 && warmup_fraction < 1.0)) {
    throw std::invalid_argument("sim: warmup_fraction must lie in (0,1)");
  }
  if (batch_count < 10) throw std::invalid_argument("sim: batch_count must be >= 10");
  const long measured = horizon_arrivals - static_cast<long>(warmup_fraction * horizon_arrivals);
  if (measured / batch_count < 1) {
    throw std::invalid_argument("sim: horizon too short for requested batches");
  }
}

namespace {

struct BatchStats {
  double mean = 0.0;
  double stderr_ = 0.0;
};

BatchStats batch_means(const std::vector<double>& batches) {
  const size_t n = batches.size();
  double sum = 0.0;
  for (double b : batches) sum += b;
  BatchStats s;
  s.mean = sum / n;
  if (n >= 2) {
    double ss = 0.0;
    for (double b : batches) ss += (b - s.mean) * (b - s.mean);
    s.stderr_ = std::sqrt(ss / (n - 1) / n);
  }
  return s;
}

}  // namespace

SimResult simulate_mmqv(const PluginStationInput& input, const SimConfig& cfg) {
  input.validate();
  cfg.validate();
  if (std::floor(input.chargers) != input.chargers) {
    throw std::invalid_argument("simulate_mmqv: chargers must be integral");
  }
  const int servers = static_cast<int>(input.chargers);
  const int cap = input.capacity;

  const long warm = static_cast<long>(cfg.warmup_fraction * cfg.horizon_arrivals);
  const long per_batch = (cfg.horizon_arrivals - warm) / cfg.batch_count;
  const long total = warm + per_batch * cfg.batch_count;

  Rng arrivals_rng(cfg.seed, 0);
  Rng service_rng(cfg.seed, 1);

  std::vector<double> blocked(cfg.batch_count, 0.0);
  std::vector<double> wait_sum(cfg.batch_count, 0.0);
  std::vector<long> accepted(cfg.batch_count, 0);
  std::vector<double> area(cfg.batch_count, 0.0);
  std::vector<double> span(cfg.batch_count, 0.0);

  // busy-server departure clock and FIFO of (arrival time, batch) waiting
  std::priority_queue<double, std::vector<double>, std::greater<>> departures;
  std::deque<std::pair<double, int>> fifo;
  int in_system = 0;
  double now = 0.0, last = 0.0, batch_t0 = 0.0;
  int batch = -1;  // -1 while warming up

  auto settle_until = [&](double t, int current_batch) {
    // process departures before time t
    while (!departures.empty() && departures.top() <= t) {
      const double td = departures.top();
      departures.pop();
      if (current_batch >= 0) area[current_batch] += in_system * (td - last);
      last = td;
      --in_system;
      if (!fifo.empty()) {
        auto [ta, b] = fifo.front();
        fifo.pop_front();
        if (b >= 0) {
          wait_sum[b] += td - ta;
          ++accepted[b];
        }
        // the head stays in the system, now occupying the freed charger
        departures.push(td + service_rng.exponential(input.service_time));
      }
    }
    if (current_batch >= 0) area[current_batch] += in_system * (t - last);
    last = t;
  };

  if (input.arrival_rate == 0.0) {
    SimResult r;
    return r;  // no arrivals, empty system
  }

  for (long i = 0; i < total; ++i) {
    now += arrivals_rng.exponential(1.0 / input.arrival_rate);
    if (i >= warm) {
      const int b = static_cast<int>((i - warm) / per_batch);
      if (b != batch) {
        if (batch >= 0) span[batch] = now - batch_t0;
        settle_until(now, batch);
        batch = b;
        batch_t0 = now;
      }
    }
    settle_until(now, batch);
    if (in_system == cap) {
      if (batch >= 0) blocked[batch] += 1.0;
      continue;
    }
    ++in_system;
    if (static_cast<int>(departures.size()) < servers) {
      if (batch >= 0) ++accepted[batch];  // wait is zero
      departures.push(now + service_rng.exponential(input.service_time));
    } else {
      fifo.emplace_back(now, batch);
    }
  }
  // drain remaining departures so late waits of measured arrivals count
  settle_until(now + 1e18, -2);
  if (batch >= 0) span[batch] = now - batch_t0;

  std::vector<double> b_block(cfg.batch_count), b_wait(cfg.batch_count), b_n(cfg.batch_count);
  for (int b = 0; b < cfg.batch_count; ++b) {
    b_block[b] = blocked[b] / per_batch;
    b_wait[b] = accepted[b] > 0 ? wait_sum[b] / accepted[b] : 0.0;
    b_n[b] = span[b] > 0.0 ? area[b] / span[b] : 0.0;
  }
  SimResult r;
  const BatchStats sb = batch_means(b_block);
  const BatchStats sw = batch_means(b_wait);
  const BatchStats sn = batch_means(b_n);
  r.blocking_estimate = sb.mean;
  r.blocking_stderr = sb.stderr_;
  r.wait_estimate = sw.mean;
  r.wait_stderr = sw.stderr_;
  r.mean_in_system = sn.mean;
  r.mean_in_system_stderr = sn.stderr_;
  r.events_processed = total;
  return r;
}

SimResult simulate_swap_station(const SwapStationInput& input, const SimConfig& cfg) {
  input.validate();
  cfg.validate();
  const double ts = input.swap_time;
  const double slot_arrival_mean = input.arrival_rate * ts;

  // size the run so the expected arrival count matches the configured
  // horizon; near-idle stations are capped rather than spun for ages
  long total_slots = cfg.horizon_arrivals;
  if (slot_arrival_mean > 0.0) {
    const double wanted = std::ceil(cfg.horizon_arrivals / slot_arrival_mean);
    total_slots = wanted < 20.0 * cfg.horizon_arrivals
                      ? static_cast<long>(wanted)
                      : 20 * cfg.horizon_arrivals;
  }
  const long warm = static_cast<long>(cfg.warmup_fraction * total_slots);
  const long per_batch = (total_slots - warm) / cfg.batch_count;
  if (per_batch < 1) throw std::invalid_argument("sim: horizon too short for requested batches");
  const long measured_slots = per_batch * cfg.batch_count;

  Rng arrivals_rng(cfg.seed, 0);
  Rng charge_rng(cfg.seed, 2);

  int evs = 0;
  int full = input.chargers;  // station starts idle with every battery charged
  // absolute completion clocks of charging batteries
  std::priority_queue<double, std::vector<double>, std::greater<>> charging;

  std::vector<double> full_frac(cfg.batch_count, 0.0);
  std::vector<double> ev_mean(cfg.batch_count, 0.0);
  long arrivals_total = 0;

  for (long slot = 0; slot < warm + measured_slots; ++slot) {
    const double t_end = (slot + 1) * ts;
    if (slot >= warm) {
      const int b = static_cast<int>((slot - warm) / per_batch);
      full_frac[b] += evs == input.ev_buffer ? 1.0 : 0.0;
      ev_mean[b] += evs;
    }

    // swap service: one EV leaves by the end of the interval when an EV and
    // a full battery are both available at its start
    const int served = (evs >= 1 && full >= 1) ? 1 : 0;
    if (served) --full;

    // batteries finishing within this interval become available at its end
    int finished = 0;
    while (!charging.empty() && charging.top() <= t_end) {
      charging.pop();
      ++finished;
    }

    // arrivals within the interval, capped by the parking spots that remain
    // once the served EV's spot is released
    const int room = input.ev_buffer - (evs - served);
    const int raw = arrivals_rng.poisson(slot_arrival_mean);
    arrivals_total += raw;
    evs = evs - served + std::min(raw, room);

    full += finished;
    if (served) charging.push(t_end + charge_rng.exponential(input.battery_charge_time));
    if (full + static_cast<int>(charging.size()) != input.chargers) {
      throw NumericError("simulate_swap_station: battery conservation violated");
    }
    assert(evs >= 0 && evs <= input.ev_buffer);
    assert(full >= 0 && full <= input.chargers);
  }

  std::vector<double> b_block(cfg.batch_count), b_wait(cfg.batch_count), b_n(cfg.batch_count);
  for (int b = 0; b < cfg.batch_count; ++b) {
    b_block[b] = full_frac[b] / per_batch;
    b_n[b] = ev_mean[b] / per_batch;
    if (input.arrival_rate > 0.0 && b_block[b] < 1.0) {
      b_wait[b] = std::max(
          0.0, b_n[b] / (input.arrival_rate * (1.0 - b_block[b])) - ts);
    } else {
      b_wait[b] = 0.0;
    }
  }
  SimResult r;
  const BatchStats sb = batch_means(b_block);
  const BatchStats sw = batch_means(b_wait);
  const BatchStats sn = batch_means(b_n);
  r.blocking_estimate = sb.mean;
  r.blocking_stderr = sb.stderr_;
  r.wait_estimate = sw.mean;
  r.wait_stderr = sw.stderr_;
  r.mean_in_system = sn.mean;
  r.mean_in_system_stderr = sn.stderr_;
  r.events_processed = arrivals_total;
  return r;
}

SwapDesComparison swap_metrics_vs_des(const SwapStationInput& input, long horizon_arrivals,
                                      std::uint64_t seed) {
  SwapDesComparison cmp;
  cmp.analytic = swap_steady_state(input);
  SimConfig cfg;
  cfg.horizon_arrivals = horizon_arrivals;
  cfg.seed = seed;
  cmp.empirical = simulate_swap_station(input, cfg);
  auto z = [](double analytic, double emp, double se) {
    if (se <= 0.0) return analytic == emp ? 0.0 : std::numeric_limits<double>::infinity();
    return (analytic - emp) / se;
  };
  cmp.blocking_z = z(cmp.analytic.blocking_probability, cmp.empirical.blocking_estimate,
                     cmp.empirical.blocking_stderr);
  cmp.wait_z = z(cmp.analytic.mean_wait, cmp.empirical.wait_estimate,
                 cmp.empirical.wait_stderr);
  cmp.mean_evs_z = z(cmp.analytic.mean_evs, cmp.empirical.mean_in_system,
                     cmp.empirical.mean_in_system_stderr);
  return cmp;
}

}  // namespace amod
