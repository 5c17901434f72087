#pragma once

namespace sgdinf {

// Standard normal CDF, accurate in both tails (erfc based).
double normal_cdf(double x);

// Standard normal density.
double normal_pdf(double x);

// Inverse standard normal CDF for p in (0, 1). Rational initial guess
// (Acklam) polished by two Newton steps on the CDF; absolute error below
// 1e-8 across p in [1e-10, 1 - 1e-10].
double z_quantile(double p);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
// Series expansion for x < a + 1, continued fraction otherwise.
double gamma_p(double a, double x);

// Chi-square CDF with d degrees of freedom.
double chi2_cdf(int d, double x);

// Inverse chi-square CDF for d >= 1, p in (0, 1): inverts gamma_p by
// safeguarded Newton iteration inside an expanding bracket.
double chi2_quantile(int d, double p);

}  // namespace sgdinf
