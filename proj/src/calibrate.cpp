#include "amod/calibrate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "amod/rng.hpp"

namespace amod {

void RegionSpec::validate() const {
  if (!(side_length > 0.0)) throw std::invalid_argument("region: side_length must be positive");
  if (!(travel_speed > 0.0)) throw std::invalid_argument("region: travel_speed must be positive");
  if (station_counts.empty()) throw std::invalid_argument("region: station_counts empty");
  for (int k : station_counts) {
    if (k < 1) throw std::invalid_argument("region: station counts must be positive");
  }
  if (samples_per_count < 1) throw std::invalid_argument("region: samples_per_count must be >= 1");
}

std::vector<SearchTimePoint> simulate_search_times(const RegionSpec& region) {
  region.validate();
  std::vector<SearchTimePoint> out;
  out.reserve(region.station_counts.size());
  for (size_t idx = 0; idx < region.station_counts.size(); ++idx) {
    const int k = region.station_counts[idx];
    Rng rng(region.seed, 1000 + static_cast<std::uint64_t>(k));
    std::vector<double> sx(k), sy(k);
    double total = 0.0;
    for (long s = 0; s < region.samples_per_count; ++s) {
      for (int i = 0; i < k; ++i) {
        sx[i] = rng.next_double() * region.side_length;
        sy[i] = rng.next_double() * region.side_length;
      }
      const double vx = rng.next_double() * region.side_length;
      const double vy = rng.next_double() * region.side_length;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < k; ++i) {
        const double dx = std::fabs(sx[i] - vx);
        const double dy = std::fabs(sy[i] - vy);
        const double d = region.metric == DistanceMetric::kEuclidean
                             ? std::sqrt(dx * dx + dy * dy)
                             : dx + dy;
        if (d < best) best = d;
      }
      total += best;
    }
    SearchTimePoint p;
    p.stations = k;
    p.mean_time = total / region.samples_per_count / region.travel_speed;
    out.push_back(p);
  }
  return out;
}

SqrtLawFit fit_sqrt_law(const std::vector<SearchTimePoint>& points) {
  if (points.size() < 4) {
    throw std::invalid_argument("fit_sqrt_law: need at least 4 points");
  }
  double sxx = 0.0, sxy = 0.0, mean_t = 0.0;
  for (const SearchTimePoint& p : points) {
    if (p.stations < 1 || !(p.mean_time > 0.0)) {
      throw std::invalid_argument("fit_sqrt_law: degenerate point");
    }
    const double x = 1.0 / std::sqrt(static_cast<double>(p.stations));
    sxx += x * x;
    sxy += x * p.mean_time;
    mean_t += p.mean_time;
  }
  mean_t /= points.size();

  SqrtLawFit fit;
  fit.scale = sxy / sxx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (const SearchTimePoint& p : points) {
    const double predicted = fit.scale / std::sqrt(static_cast<double>(p.stations));
    ss_res += (p.mean_time - predicted) * (p.mean_time - predicted);
    ss_tot += (p.mean_time - mean_t) * (p.mean_time - mean_t);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.points = points;
  return fit;
}

}  // namespace amod
