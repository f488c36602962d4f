#pragma once

namespace bdn {

// Scalar normal-distribution special functions. These are pure math with no
// RNG dependency; the samplers in distributions.hpp build on them.

// log of the N(mean, var) density at x. var must be positive.
double normal_logpdf(double x, double mean, double var);

// Standard normal CDF.
double normal_cdf(double x);

// log Phi(x), stable for arbitrarily deep lower-tail arguments.
double normal_logcdf(double x);

// log(Phi(hi) - Phi(lo)), stable when both arguments sit in the same tail.
// Accepts hi = +inf and lo = -inf. Throws std::invalid_argument if hi <= lo.
double normal_logcdf_diff(double hi, double lo);

// Inverse standard normal CDF (Wichura's AS 241, double precision).
// p must lie in (0, 1).
double normal_quantile(double p);

}  // namespace bdn
