#pragma once

namespace hifd {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0. Series expansion
// for x < a+1, Lentz continued fraction otherwise.
double regularized_gamma_p(double a, double x);

// Chi-square CDF with (possibly fractional) dof degrees of freedom.
double chi2_cdf(double dof, double x);

// Inverse chi-square CDF: the x with P(dof/2, x/2) = p, solved to
// |delta p| < 1e-10. Supports non-integer dof.
double chi2_quantile(double dof, double p);

}  // namespace hifd
