#pragma once

#include <stdexcept>
#include <string>

namespace amod {

// Market or planning problem has no feasible solution (Lemma-type conditions
// violated). Distinct from numeric failure so callers can map exit codes.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// A solver failed numerically (singular system, non-convergence, values
// outside tolerated round-off bands).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration file is malformed (unknown key, missing unit tag, bad value).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace amod
