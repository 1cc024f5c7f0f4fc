#pragma once

namespace fcsig {

// Standard normal CDF, accurate to a few ulp over the full double range.
double normal_cdf(double x);

// Upper tail 1 - Phi(x), computed without cancellation for large x.
double normal_upper_tail(double x);

// Standard normal quantile (inverse CDF) for p in (0, 1).
// Wichura's algorithm AS 241, relative error below 1e-15.
double normal_quantile(double p);

// Regularized lower/upper incomplete gamma P(a, x), Q(a, x) for a > 0, x >= 0.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_upper_tail(double x, double df);

}  // namespace fcsig
