#pragma once

#include <cstdint>

namespace amod {

// Counter-based 64-bit generator (splitmix64 over an incrementing counter),
// keyed by (seed, stream). Each logical process in a simulation draws from
// its own stream so replays stay aligned when one process consumes more
// randomness:
//   stream 0 - arrivals, 1 - services, 2 - battery charges,
//   1000 + i - spatial calibration substream for the i-th station count.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_double();                // uniform [0, 1)
  double exponential(double mean);     // mean > 0
  int poisson(double mean);            // mean >= 0

 private:
  std::uint64_t counter_;
};

}  // namespace amod
