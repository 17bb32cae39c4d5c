#include "amod/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace amod {
namespace {

constexpr double kEps = 2.22044604925031308e-16;
constexpr double kFpMin = 1e-300;

// Lower regularized gamma P(a,x) by power series, valid for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma_p_series: no convergence");
}

// Continued fraction for Q(a,x)*exp(x - a*log(x) + lgamma(a)), valid x >= a+1.
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) return h;
  }
  throw std::runtime_error("gamma_q_cf: no convergence");
}

// log(expm1(w)) for w > 0 without overflow.
double log_expm1(double w) {
  if (w > 36.0) return w;               // e^-w below double precision
  if (w > 1e-8) return std::log(std::expm1(w));
  return std::log(w) + w / 2.0;         // expm1(w) ~ w(1 + w/2)
}

void check_domain(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw std::invalid_argument("regularized_upper_gamma: need a > 0, x >= 0");
  }
}

}  // namespace

double regularized_upper_gamma(double a, double x) {
  check_domain(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  const double q = gamma_q_cf(a, x) * std::exp(-x + a * std::log(x) - std::lgamma(a));
  return q < 0.0 ? 0.0 : q;
}

double log_regularized_upper_gamma(double a, double x) {
  check_domain(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return std::log1p(-gamma_p_series(a, x));
  return -x + a * std::log(x) - std::lgamma(a) + std::log(gamma_q_cf(a, x));
}

double log_sum_exp(double u, double v) {
  if (u == -std::numeric_limits<double>::infinity()) return v;
  if (v == -std::numeric_limits<double>::infinity()) return u;
  const double m = u > v ? u : v;
  return m + std::log(std::exp(u - m) + std::exp(v - m));
}

namespace {

// Faulhaber sums continued to real m: sum of j^k over j = 0..m.
double fsum1(double m) { return m * (m + 1) / 2.0; }
double fsum2(double m) { return m * (m + 1) * (2 * m + 1) / 6.0; }
double fsum3(double m) { const double s = fsum1(m); return s * s; }
double fsum4(double m) { return m * (m + 1) * (2 * m + 1) * (3 * m * m + 3 * m - 1) / 30.0; }

constexpr double kSeriesSwitch = 1e-7;

}  // namespace

double log_geom_sum(double w, double m) {
  if (!(m >= 0.0)) throw std::invalid_argument("log_geom_sum: need m >= 0");
  if (std::fabs(w) < kSeriesSwitch) {
    // S0 = (m+1) + w*S1 + w^2/2*S2 + w^3/6*S3, truncation O(w^4 m^5)
    const double s = (m + 1) + w * fsum1(m) + w * w / 2 * fsum2(m) + w * w * w / 6 * fsum3(m);
    return std::log(s);
  }
  const double t = (m + 1) * w;
  if (w < 0.0) return std::log(std::expm1(t) / std::expm1(w));
  if (t < 700.0) return std::log(std::expm1(t) / std::expm1(w));
  return t + std::log1p(-std::exp(-t)) - log_expm1(w);
}

double log_weighted_geom_sum(double w, double m) {
  if (!(m >= 0.0)) throw std::invalid_argument("log_weighted_geom_sum: need m >= 0");
  if (m == 0.0) return -std::numeric_limits<double>::infinity();
  if (std::fabs(w) < kSeriesSwitch) {
    const double s = fsum1(m) + w * fsum2(m) + w * w / 2 * fsum3(m) + w * w * w / 6 * fsum4(m);
    return std::log(s);
  }
  if (w > 0.0 && (m + 2) * w >= 600.0) {
    // S1*E1^2 = Em*E1*(m + (m+1)/Em - 1/E1); factor out the large Em term
    const double log_em = log_expm1((m + 1) * w);
    const double log_e1 = log_expm1(w);
    const double bracket = m + std::exp(std::log(m + 1) - log_em) - std::exp(-log_e1);
    return log_em - log_e1 + std::log(bracket);
  }
  const double e1 = std::expm1(w);
  const double em = std::expm1((m + 1) * w);
  const double num = m * em * e1 + (m + 1) * e1 - em;
  return std::log(num / (e1 * e1));
}

}  // namespace amod
