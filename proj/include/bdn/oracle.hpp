#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bdn/activation.hpp"
#include "bdn/distributions.hpp"
#include "bdn/gibbs.hpp"
#include "bdn/model.hpp"

namespace bdn {

// Uniform grid with trapezoid-rule helpers, used by the brute-force
// reference implementations below.
struct Grid1D {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;

  double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  double point(int i) const { return lo + step() * i; }
  // Trapezoid integral of tabulated values over the grid.
  double integrate(const Eigen::VectorXd& values) const;
};

// Brute-force counterpart of mixture_conditional_v: tabulate the unnormalized
// density N(v | prior_mean, tau2) * N(u_next | h(v), sigma2) on a grid.
struct GridDensity {
  Grid1D grid;
  Eigen::VectorXd density;     // normalized values on the grid
  double log_norm = 0.0;       // log of the raw normalizing integral

  double mean() const;
  double variance() const;
  // Probability mass of [a, b], clipped to the grid.
  double mass(double a, double b) const;
};

GridDensity grid_conditional_v(const PiecewiseLinearActivation& act, double prior_mean,
                               double tau2, double sigma2, double u_next, const Grid1D& grid);

// Per-segment masses of a grid density at the activation's knots, comparable
// to mixture weights.
std::vector<double> grid_segment_masses(const PiecewiseLinearActivation& act,
                                        const GridDensity& density);

// Exact mean/variance of a truncated-normal mixture, for cross-checks.
double mixture_mean(const AdjacentTruncatedNormalMixture& mix);
double mixture_variance(const AdjacentTruncatedNormalMixture& mix);

// Numeric marginal predictive density p(y | x, params) for a univariate
// network, by propagating a tabulated density through each layer with
// trapezoid quadrature. Each layer's grid is recentered on the deterministic
// trajectory and sized from the accumulated noise scale.
struct PredictiveDensityNumeric {
  Grid1D grid;                // output grid
  Eigen::VectorXd density;    // p(y | x) on the grid

  double mean() const;
  double variance() const;
};

PredictiveDensityNumeric predictive_density_numeric(const NetworkShape& shape,
                                                    const ModelParams& params, double x,
                                                    int grid_points = 4096,
                                                    double tail_scales = 10.0);

// Simulation-based sampler correctness check: compare moments of scalar
// summaries between (a) independent prior draws with fresh data and (b) a
// Gibbs chain that redraws the data each step from the current parameters.
// Both target the same joint law when every conditional is correct.
struct GewekeStat {
  std::string name;
  double marginal_mean = 0.0;
  double marginal_se = 0.0;
  double successive_mean = 0.0;
  double successive_se = 0.0;
  double z = 0.0;
};

struct GewekeConfig {
  int rounds = 2000;
  int n_obs = 8;
  int thin = 5;          // successive-conditional subsampling
  std::uint64_t seed = 1;
  // Variance hyperpriors need finite low-order moments for the z-statistics
  // to be meaningful, hence the informative default.
  PriorConfig prior{3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0};
  double variance_floor = 1e-12;
};

std::vector<GewekeStat> geweke_compare(const NetworkShape& shape, const GewekeConfig& config,
                                       FaultInjection fault = FaultInjection::none);

}  // namespace bdn
