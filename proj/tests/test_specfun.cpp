#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "amod/specfun.hpp"

using namespace amod;

TEST_CASE("upper gamma closed forms") {
  // Q(1,x) = e^-x
  CHECK(regularized_upper_gamma(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(regularized_upper_gamma(1.0, 0.3) == doctest::Approx(std::exp(-0.3)).epsilon(1e-12));
  // Q(1/2, z^2) = erfc(z)
  CHECK(regularized_upper_gamma(0.5, 0.25) == doctest::Approx(std::erfc(0.5)).epsilon(1e-12));
  CHECK(regularized_upper_gamma(0.5, 4.0) == doctest::Approx(std::erfc(2.0)).epsilon(1e-12));
}

TEST_CASE("upper gamma boundary and monotonicity") {
  for (double a : {0.3, 1.0, 2.5, 8.4536, 40.0}) {
    CHECK(regularized_upper_gamma(a, 0.0) == 1.0);
    double prev = 1.0;
    for (double x = 0.25; x < 8 * a; x *= 1.7) {
      const double q = regularized_upper_gamma(a, x);
      CHECK(q <= prev);
      CHECK(q >= 0.0);
      prev = q;
    }
  }
  CHECK_THROWS_AS(regularized_upper_gamma(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(regularized_upper_gamma(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("upper gamma against the partial exponential sum") {
  // for integer a: Q(a,x) = e^-x sum_{k<a} x^k/k!
  for (int a : {1, 2, 5, 9, 17}) {
    for (double x : {0.1, 1.0, 3.7, 12.0, 40.0}) {
      double sum = 0.0;
      for (int k = 0; k < a; ++k) {
        sum += std::exp(-x + k * std::log(x) - std::lgamma(k + 1.0));
      }
      CHECK(regularized_upper_gamma(a, x) == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("log upper gamma tracks the linear version and survives deep tails") {
  CHECK(log_regularized_upper_gamma(3.0, 5.0) ==
        doctest::Approx(std::log(regularized_upper_gamma(3.0, 5.0))).epsilon(1e-12));
  // far tail where the linear value would underflow
  const double lg = log_regularized_upper_gamma(2.0, 800.0);
  // Q(2,x) = e^-x (1+x)
  CHECK(lg == doctest::Approx(-800.0 + std::log(801.0)).epsilon(1e-12));
}

TEST_CASE("geometric sums match direct summation") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> ratio(0.05, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(gen() % 60);
    const double a = ratio(gen);
    const double w = std::log(a);
    double s0 = 0.0, s1 = 0.0;
    for (int j = 0; j <= m; ++j) {
      s0 += std::pow(a, j);
      s1 += j * std::pow(a, j);
    }
    CHECK(log_geom_sum(w, m) == doctest::Approx(std::log(s0)).epsilon(1e-11));
    CHECK(log_weighted_geom_sum(w, m) == doctest::Approx(std::log(s1)).epsilon(1e-11));
  }
}

TEST_CASE("geometric sums at and near the unit ratio") {
  for (double m : {1.0, 4.0, 17.5, 80.0}) {
    CHECK(log_geom_sum(0.0, m) == doctest::Approx(std::log(m + 1)).epsilon(1e-14));
    CHECK(log_weighted_geom_sum(0.0, m) ==
          doctest::Approx(std::log(m * (m + 1) / 2)).epsilon(1e-14));
    // continuity across the series switch
    for (double w : {-1e-6, -1e-8, 1e-8, 1e-6}) {
      const double near = log_weighted_geom_sum(w, m);
      const double at = log_weighted_geom_sum(0.0, m);
      CHECK(near == doctest::Approx(at).epsilon(1e-4));
    }
  }
}

TEST_CASE("geometric sums survive huge ratios") {
  const double big = log_geom_sum(20.0, 100.0);  // ratio e^20, top term e^2000
  CHECK(std::isfinite(big));
  CHECK(big == doctest::Approx(100 * 20.0).epsilon(1e-6));  // dominated by last term
  const double bigw = log_weighted_geom_sum(20.0, 100.0);
  CHECK(std::isfinite(bigw));
  CHECK(bigw == doctest::Approx(100 * 20.0 + std::log(100.0)).epsilon(1e-4));
}
