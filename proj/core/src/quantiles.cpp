#include "sgdinf/quantiles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sgdinf/errors.hpp"

namespace sgdinf {

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x) {
  static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

namespace {

// Acklam's rational approximation to the inverse normal CDF,
// |relative error| < 1.15e-9 over the full open interval.
double z_quantile_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double z_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("z_quantile: p must lie in (0, 1), got " +
                      std::to_string(p));
  }
  // Work in the lower tail, where the erfc-based CDF keeps full relative
  // precision for the Newton residual; 1 - p is exact for p >= 0.5.
  if (p > 0.5) return -z_quantile(1.0 - p);
  double x = z_quantile_approx(p);
  for (int iter = 0; iter < 2; ++iter) {
    const double pdf = normal_pdf(x);
    if (pdf <= 0.0) break;
    x -= (normal_cdf(x) - p) / pdf;
  }
  return x;
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) {
    throw ConfigError("gamma_p: shape must be positive, got " +
                      std::to_string(a));
  }
  if (x < 0.0) {
    throw ConfigError("gamma_p: x must be nonnegative, got " +
                      std::to_string(x));
  }
  if (x == 0.0) return 0.0;

  constexpr int max_iter = 500;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double fpmin = std::numeric_limits<double>::min() / eps;
  const double lg = std::lgamma(a);

  if (x < a + 1.0) {
    // Series: P(a,x) = x^a e^{-x} / Gamma(a) * sum_k x^k / (a(a+1)...(a+k)).
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int k = 0; k < max_iter; ++k) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * eps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }

  // Lentz continued fraction for Q(a,x); P = 1 - Q.
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k <= max_iter; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

double chi2_cdf(int d, double x) {
  if (d < 1) {
    throw ConfigError("chi2_cdf: degrees of freedom must be >= 1, got " +
                      std::to_string(d));
  }
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * d, 0.5 * x);
}

double chi2_quantile(int d, double p) {
  if (d < 1) {
    throw ConfigError("chi2_quantile: degrees of freedom must be >= 1, got " +
                      std::to_string(d));
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("chi2_quantile: p must lie in (0, 1), got " +
                      std::to_string(p));
  }

  // Wilson-Hilferty starting point, then grow a sign-changing bracket.
  const double z = z_quantile(p);
  const double t = 1.0 - 2.0 / (9.0 * d) + z * std::sqrt(2.0 / (9.0 * d));
  double x = d * t * t * t;
  if (!(x > 0.0) || !std::isfinite(x)) x = static_cast<double>(d);

  double lo = x, hi = x;
  while (chi2_cdf(d, lo) > p && lo > std::numeric_limits<double>::min()) {
    lo *= 0.5;
  }
  while (chi2_cdf(d, hi) < p) hi *= 2.0;

  // Newton on the CDF, with bisection whenever a step leaves the bracket.
  const double a = 0.5 * d;
  const double lg = std::lgamma(a);
  x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = chi2_cdf(d, x) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double pdf =
        0.5 * std::exp((a - 1.0) * std::log(0.5 * x) - 0.5 * x - lg);
    double next = (pdf > 0.0) ? x - f / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-14 * x) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

}  // namespace sgdinf
