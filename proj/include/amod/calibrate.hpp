#pragma once

#include <cstdint>
#include <vector>

namespace amod {

enum class DistanceMetric { kEuclidean, kManhattan };

// Synthetic square service region for calibrating the square-root matching
// law: stations and vehicles are drawn uniformly, vehicles travel to the
// nearest station.
struct RegionSpec {
  double side_length = 1.0;     // miles
  double travel_speed = 1.0;    // mph
  std::vector<int> station_counts;
  long samples_per_count = 10000;
  std::uint64_t seed = 1;
  DistanceMetric metric = DistanceMetric::kEuclidean;

  void validate() const;
};

struct SearchTimePoint {
  int stations = 0;
  double mean_time = 0.0;  // hours
};

struct SqrtLawFit {
  double scale = 0.0;      // fitted B in t = B / sqrt(K)
  double r_squared = 0.0;
  std::vector<SearchTimePoint> points;
};

// Mean travel time to the nearest station for each configured station count.
// Every sample redraws both the vehicle and the station layout, so the
// estimate averages over the placement randomness as well. Each station
// count consumes its own RNG substream (deterministic per seed, independent
// of the order counts are listed in).
std::vector<SearchTimePoint> simulate_search_times(const RegionSpec& region);

// Single-parameter least squares of t on 1/sqrt(K), no intercept.
SqrtLawFit fit_sqrt_law(const std::vector<SearchTimePoint>& points);

}  // namespace amod
