#include "bdn/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdn {

namespace {
constexpr double kTailStart = 5.0;  // standardized offset where rejection takes over

// One-sided/two-sided tail sampler (Robert 1995): exponential proposal with
// rate a* = (alpha + sqrt(alpha^2+4))/2, truncated to [alpha, beta].
double sample_tail(double alpha, double beta, RngStream& rng) {
  const double astar = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
  const double span = beta - alpha;  // may be +inf
  for (;;) {
    double z;
    if (std::isinf(span)) {
      z = alpha + rng.next_exponential() / astar;
    } else {
      // Exact inverse-CDF draw from the proposal truncated to [alpha, beta].
      const double u = rng.next_uniform();
      z = alpha - std::log1p(-u * (-std::expm1(-astar * span))) / astar;
    }
    const double diff = z - astar;
    if (std::log(rng.next_uniform()) <= -0.5 * diff * diff) return z;
  }
}

double lgamma_safe(double x) { return std::lgamma(x); }
}  // namespace

void TruncatedNormalSpec::validate() const {
  if (!(scale > 0.0)) throw std::invalid_argument("truncated normal: scale must be positive");
  if (!(lower < upper)) throw std::invalid_argument("truncated normal: need lower < upper");
}

void AdjacentTruncatedNormalMixture::normalize() {
  double mx = -std::numeric_limits<double>::infinity();
  for (double w : log_weights) mx = std::max(mx, w);
  if (std::isinf(mx)) throw std::invalid_argument("mixture: all weights are -inf");
  double total = 0.0;
  for (double w : log_weights) total += std::exp(w - mx);
  const double log_total = mx + std::log(total);
  for (double& w : log_weights) w -= log_total;
}

double sample_normal(double mean, double var, RngStream& rng) {
  if (!(var > 0.0)) throw std::invalid_argument("sample_normal: var must be positive");
  return mean + std::sqrt(var) * rng.next_normal();
}

double sample_truncated_normal(const TruncatedNormalSpec& spec, RngStream& rng) {
  spec.validate();
  const double inf = std::numeric_limits<double>::infinity();
  double alpha = (spec.lower == -inf) ? -inf : (spec.lower - spec.location) / spec.scale;
  double beta = (spec.upper == inf) ? inf : (spec.upper - spec.location) / spec.scale;

  double z;
  if (alpha >= kTailStart) {
    z = sample_tail(alpha, beta, rng);
  } else if (beta <= -kTailStart) {
    z = -sample_tail(-beta, -alpha, rng);
  } else {
    const double plo = (alpha == -inf) ? 0.0 : normal_cdf(alpha);
    const double phi = (beta == inf) ? 1.0 : normal_cdf(beta);
    const double u = plo + rng.next_uniform() * (phi - plo);
    z = normal_quantile(std::min(std::max(u, 1e-300), 1.0 - 1e-16));
  }
  const double x = spec.location + spec.scale * z;
  // Draws must never escape the interval even under rounding.
  return std::min(std::max(x, spec.lower), spec.upper);
}

double truncated_normal_mean(const TruncatedNormalSpec& spec) {
  spec.validate();
  const double inf = std::numeric_limits<double>::infinity();
  const double alpha = (spec.lower == -inf) ? -inf : (spec.lower - spec.location) / spec.scale;
  const double beta = (spec.upper == inf) ? inf : (spec.upper - spec.location) / spec.scale;
  const double logz = normal_logcdf_diff(beta, alpha);
  const double a_term =
      (alpha == -inf) ? 0.0 : std::exp(normal_logpdf(alpha, 0.0, 1.0) - logz);
  const double b_term =
      (beta == inf) ? 0.0 : std::exp(normal_logpdf(beta, 0.0, 1.0) - logz);
  return spec.location + spec.scale * (a_term - b_term);
}

double truncated_normal_var(const TruncatedNormalSpec& spec) {
  spec.validate();
  const double inf = std::numeric_limits<double>::infinity();
  const double alpha = (spec.lower == -inf) ? -inf : (spec.lower - spec.location) / spec.scale;
  const double beta = (spec.upper == inf) ? inf : (spec.upper - spec.location) / spec.scale;
  const double logz = normal_logcdf_diff(beta, alpha);
  const double pa = (alpha == -inf) ? 0.0 : std::exp(normal_logpdf(alpha, 0.0, 1.0) - logz);
  const double pb = (beta == inf) ? 0.0 : std::exp(normal_logpdf(beta, 0.0, 1.0) - logz);
  const double apa = (alpha == -inf) ? 0.0 : alpha * pa;
  const double bpb = (beta == inf) ? 0.0 : beta * pb;
  const double m = pa - pb;
  return spec.scale * spec.scale * (1.0 + apa - bpb - m * m);
}

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost trick: G(a) = G(a+1) * U^{1/a}; do the power in log space since
    // U^{1/a} underflows for small shapes.
    const double g = sample_gamma(shape + 1.0, rng);
    const double logu = std::log(rng.next_uniform());
    return std::exp(std::log(g) + logu / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_inverse_gamma_log(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0 && rate > 0.0))
    throw std::invalid_argument("sample_inverse_gamma: shape and rate must be positive");
  double log_g;
  if (shape < 1.0) {
    // Keep the shape boost in log space so tiny shapes stay representable.
    log_g = std::log(sample_gamma(shape + 1.0, rng)) +
            std::log(rng.next_uniform()) / shape;
  } else {
    log_g = std::log(sample_gamma(shape, rng));
  }
  return std::log(rate) - log_g;
}

double sample_inverse_gamma(double shape, double rate, RngStream& rng) {
  return std::exp(sample_inverse_gamma_log(shape, rate, rng));
}

std::size_t sample_categorical(std::span<const double> log_weights, RngStream& rng) {
  if (log_weights.empty()) throw std::invalid_argument("sample_categorical: empty weights");
  double mx = -std::numeric_limits<double>::infinity();
  for (double w : log_weights) mx = std::max(mx, w);
  if (std::isinf(mx)) throw std::invalid_argument("sample_categorical: all weights are -inf");
  double total = 0.0;
  for (double w : log_weights) total += std::exp(w - mx);
  const double target = rng.next_uniform() * total;
  double cum = 0.0;
  for (std::size_t j = 0; j < log_weights.size(); ++j) {
    cum += std::exp(log_weights[j] - mx);
    if (target < cum) return j;
  }
  // Rounding can push the target past the last increment.
  for (std::size_t j = log_weights.size(); j-- > 0;)
    if (!std::isinf(log_weights[j])) return j;
  return log_weights.size() - 1;
}

double sample_mixture(const AdjacentTruncatedNormalMixture& mix, RngStream& rng) {
  if (mix.components.size() != mix.log_weights.size() || mix.components.empty())
    throw std::invalid_argument("sample_mixture: malformed mixture");
  const std::size_t j = sample_categorical(mix.log_weights, rng);
  return sample_truncated_normal(mix.components[j], rng);
}

double inverse_gamma_logpdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(rate) - lgamma_safe(shape) - (shape + 1.0) * std::log(x) -
         rate / x;
}

}  // namespace bdn
