#include "amod/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace amod {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : counter_(mix64(seed) ^ mix64(mix64(stream) + 0x632be59bd9b4e019ULL)) {}

std::uint64_t Rng::next_u64() {
  counter_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = counter_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::next_double() {
  return (next_u64() >> 11) * 0x1.0p-53;
}

double Rng::exponential(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("exponential: mean must be positive");
  double u;
  do {
    u = next_double();
  } while (u == 0.0);
  return -mean * std::log(u);
}

int Rng::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean < 60.0) {
    // Knuth: count exponential gaps inside a unit interval
    const double limit = std::exp(-mean);
    double prod = 1.0;
    int k = -1;
    do {
      prod *= next_double();
      ++k;
    } while (prod > limit);
    return k;
  }
  // Split recursively: Poisson(a+b) = Poisson(a) + Poisson(b). Keeps each
  // piece in the range where the product method is numerically sound.
  const double half = mean / 2.0;
  return poisson(half) + poisson(mean - half);
}

}  // namespace amod
