#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "amod/calibrate.hpp"
#include "amod/rng.hpp"

using namespace amod;

namespace {

// Brute-force oracle: expected distance between two independent uniform
// points in the unit square, by plain Monte Carlo with its own generator.
double point_pair_distance_oracle(long samples, std::uint64_t seed) {
  Rng rng(seed, 77);
  double total = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double dx = rng.next_double() - rng.next_double();
    const double dy = rng.next_double() - rng.next_double();
    total += std::sqrt(dx * dx + dy * dy);
  }
  return total / samples;
}

}  // namespace

TEST_CASE("single-station region reduces to the uniform point-pair distance") {
  // closed form: (2 + sqrt(2) + 5 asinh(1)) / 15 = 0.52140543...
  const double oracle = point_pair_distance_oracle(400000, 9);
  CHECK(oracle == doctest::Approx(0.5214054331).epsilon(3e-3));

  RegionSpec region;
  region.side_length = 1.0;
  region.travel_speed = 1.0;
  region.station_counts = {1};
  region.samples_per_count = 400000;
  region.seed = 4;
  const auto pts = simulate_search_times(region);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].mean_time == doctest::Approx(oracle).epsilon(4e-3));
}

TEST_CASE("travel speed scales times linearly") {
  RegionSpec region;
  region.side_length = 8.0;
  region.travel_speed = 10.0;
  region.station_counts = {9, 36};
  region.samples_per_count = 20000;
  region.seed = 12;
  const auto slow = simulate_search_times(region);
  region.travel_speed = 20.0;
  const auto fast = simulate_search_times(region);
  for (size_t i = 0; i < slow.size(); ++i) {
    CHECK(fast[i].mean_time == doctest::Approx(slow[i].mean_time / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("denser stations shorten the search everywhere") {
  RegionSpec region;
  region.side_length = 6.0;
  region.travel_speed = 12.0;
  region.station_counts = {4, 16, 64, 256};
  region.samples_per_count = 30000;
  region.seed = 21;
  const auto pts = simulate_search_times(region);
  for (size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].mean_time < pts[i - 1].mean_time);
  }
}

TEST_CASE("exact law recovers exactly") {
  std::vector<SearchTimePoint> pts;
  for (int k : {4, 9, 25, 64, 144}) {
    pts.push_back({k, 5.0 / std::sqrt(static_cast<double>(k))});
  }
  const SqrtLawFit fit = fit_sqrt_law(pts);
  CHECK(fit.scale == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("one-percent noise moves the fitted scale by about as much") {
  std::vector<SearchTimePoint> pts;
  Rng rng(5, 50);
  for (int k : {9, 16, 36, 81, 121, 196}) {
    const double noise = 1.0 + 0.01 * (2.0 * rng.next_double() - 1.0);
    pts.push_back({k, 5.0 / std::sqrt(static_cast<double>(k)) * noise});
  }
  const SqrtLawFit fit = fit_sqrt_law(pts);
  CHECK(fit.scale == doctest::Approx(5.0).epsilon(0.02));
}

TEST_CASE("simulated square region obeys the square-root law tightly") {
  RegionSpec region;
  region.side_length = 10.0;
  region.travel_speed = 15.0;
  for (int k = 25; k <= 400; k += 25) region.station_counts.push_back(k);
  region.samples_per_count = 20000;
  region.seed = 2;
  const SqrtLawFit fit = fit_sqrt_law(simulate_search_times(region));
  CHECK(fit.r_squared >= 0.99);
  CHECK(fit.scale > 0.0);
}

TEST_CASE("region scale carries into the fitted constant") {
  RegionSpec region;
  region.side_length = 5.0;
  region.travel_speed = 10.0;
  region.station_counts = {25, 49, 100, 196};
  region.samples_per_count = 40000;
  region.seed = 8;
  const SqrtLawFit base = fit_sqrt_law(simulate_search_times(region));
  region.side_length = 10.0;
  const SqrtLawFit doubled = fit_sqrt_law(simulate_search_times(region));
  CHECK(doubled.scale == doctest::Approx(2.0 * base.scale).epsilon(0.02));
}

TEST_CASE("degenerate fits are rejected") {
  std::vector<SearchTimePoint> few = {{4, 1.0}, {9, 0.7}, {16, 0.5}};
  CHECK_THROWS_AS(fit_sqrt_law(few), std::invalid_argument);
  std::vector<SearchTimePoint> bad = {{4, 1.0}, {9, 0.7}, {16, 0.5}, {25, 0.0}};
  CHECK_THROWS_AS(fit_sqrt_law(bad), std::invalid_argument);
}
