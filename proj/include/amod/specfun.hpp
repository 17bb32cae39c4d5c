#pragma once

namespace amod {

// Regularized upper incomplete gamma function Q(a,x) = Gamma(a,x)/Gamma(a).
// Q(a,0) = 1, monotone decreasing in x, range (0,1].
// a > 0, x >= 0 required.
double regularized_upper_gamma(double a, double x);

// log(Q(a,x)) without underflow for x >> a, where Q(a,x) itself would
// round to zero.
double log_regularized_upper_gamma(double a, double x);

// log(exp(u) + exp(v)) computed stably; handles -inf operands.
double log_sum_exp(double u, double v);

// Finite geometric sums continued to real length m >= 0, parameterized by
// w = log(ratio):
//   geom:     S0(w,m) = sum_{j=0..m} e^{jw}   -> (e^{(m+1)w}-1)/(e^w-1)
//   weighted: S1(w,m) = sum_{j=0..m} j e^{jw} = d/dw S0(w,m)
// Returned in log space; exact limits at w = 0 (S0 = m+1, S1 = m(m+1)/2).
// Safe for large positive w*(m+1) (no overflow).
double log_geom_sum(double w, double m);
double log_weighted_geom_sum(double w, double m);

}  // namespace amod
