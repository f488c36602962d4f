#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "bdn/normal.hpp"
#include "bdn/rng.hpp"

namespace bdn {

// Normal truncated to [lower, upper]; either bound may be infinite.
struct TruncatedNormalSpec {
  double location = 0.0;
  double scale = 1.0;  // standard deviation, not variance
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  void validate() const;
};

// Mixture of truncated normals whose intervals partition the real line at
// consecutive knots. log_weights may be unnormalized.
struct AdjacentTruncatedNormalMixture {
  std::vector<TruncatedNormalSpec> components;
  std::vector<double> log_weights;

  // Shifts log_weights so their exponentials sum to 1.
  void normalize();
};

double sample_normal(double mean, double var, RngStream& rng);

// Stable for truncation intervals arbitrarily deep in the tail: inverse-CDF
// in the central regime, exponential-proposal rejection once the interval
// starts 5 scale units past the location.
double sample_truncated_normal(const TruncatedNormalSpec& spec, RngStream& rng);

double truncated_normal_mean(const TruncatedNormalSpec& spec);
double truncated_normal_var(const TruncatedNormalSpec& spec);

// Gamma(shape, rate 1) via Marsaglia-Tsang; shape < 1 handled by boosting.
double sample_gamma(double shape, RngStream& rng);

// Inverse-gamma with density proportional to x^{-a-1} exp(-b/x).
double sample_inverse_gamma(double shape, double rate, RngStream& rng);

// Log of an inverse-gamma draw. Stays finite even for very small shapes,
// where the draw itself can exceed the double range.
double sample_inverse_gamma_log(double shape, double rate, RngStream& rng);

// Index j with probability softmax(log_weights)_j, computed via log-sum-exp.
// Throws if every weight is -inf.
std::size_t sample_categorical(std::span<const double> log_weights, RngStream& rng);

double sample_mixture(const AdjacentTruncatedNormalMixture& mix, RngStream& rng);

double inverse_gamma_logpdf(double x, double shape, double rate);

}  // namespace bdn
