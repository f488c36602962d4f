#include "bdn/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bdn {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kSqrt1_2 = 0.70710678118654752440084436210485;

// Asymptotic expansion of log Phi(x) for x << 0:
//   Phi(x) = phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8 - ...)
double logcdf_tail(double x) {
  const double x2 = x * x;
  double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2) +
                  105.0 / (x2 * x2 * x2 * x2);
  return -0.5 * x2 - 0.5 * kLog2Pi - std::log(-x) + std::log(series);
}
}  // namespace

double normal_logpdf(double x, double mean, double var) {
  if (!(var > 0.0)) throw std::invalid_argument("normal_logpdf: var must be positive");
  const double z = x - mean;
  return -0.5 * (kLog2Pi + std::log(var) + z * z / var);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

double normal_logcdf(double x) {
  if (x > -1.0) return std::log1p(-0.5 * std::erfc(x * kSqrt1_2));
  if (x > -30.0) return std::log(0.5 * std::erfc(-x * kSqrt1_2));
  return logcdf_tail(x);
}

double normal_logcdf_diff(double hi, double lo) {
  if (!(hi > lo)) throw std::invalid_argument("normal_logcdf_diff: hi must exceed lo");
  const double inf = std::numeric_limits<double>::infinity();
  if (lo == -inf && hi == inf) return 0.0;
  if (lo == -inf) return normal_logcdf(hi);
  if (hi == inf) return normal_logcdf(-lo);
  if (hi <= 0.0) {
    // Both in the lower tail: anchor at the larger of the two CDF values.
    const double la = normal_logcdf(hi);
    const double lb = normal_logcdf(lo);
    return la + std::log1p(-std::exp(lb - la));
  }
  if (lo >= 0.0) {
    // Mirror to the lower tail: Phi(hi) - Phi(lo) = Phi(-lo) - Phi(-hi).
    return normal_logcdf_diff(-lo, -hi);
  }
  // Interval straddles zero; the excluded tail mass is the stable quantity.
  return std::log1p(-(normal_cdf(lo) + normal_cdf(-hi)));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  // AS 241 algorithm PPND16 (Wichura, 1988).
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

}  // namespace bdn
