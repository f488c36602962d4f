#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "bdn/model.hpp"

namespace bdn {

struct EvalReport {
  double rmse = 0.0;
  double nll = 0.0;
  double wepi_95 = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> coverage;  // (nominal level, empirical)
  std::optional<double> quantile_l1;
};

// Linear interpolation between order statistics; draws must be sorted.
double empirical_quantile(const std::vector<double>& sorted, double p);

double rmse(const PredictiveEnsemble& ensemble, const Eigen::MatrixXd& y_true);

// Mean negative log predictive density using the Rao-Blackwellized Gaussian
// mixture over the stored final-layer components, evaluated via log-sum-exp.
// Output coordinates are conditionally independent given the final hidden
// state, matching the diagonal output covariance.
double nll(const PredictiveEnsemble& ensemble, const Eigen::MatrixXd& y_true);

// Mean width of the equal-tailed empirical prediction intervals at the
// smallest nominal level covering at least target_coverage of y_true; +inf
// when even the full draw range falls short. Level search granularity 1e-4.
double wepi(const PredictiveEnsemble& ensemble, const Eigen::MatrixXd& y_true,
            double target_coverage = 0.95);

std::vector<std::pair<double, double>> coverage_curve(const PredictiveEnsemble& ensemble,
                                                      const Eigen::MatrixXd& y_true,
                                                      const std::vector<double>& levels);

// Probability grid at which inverse CDFs are compared: p = 0.005, 0.015,
// ..., 0.995. Fixed so reported numbers are comparable across runs.
std::vector<double> quantile_l1_p_grid();

// Mean over grid inputs of the mean absolute inverse-CDF gap between the
// pooled draws and the true quantile function on the p-grid (Wasserstein-1
// per input).
double quantile_l1(const std::vector<Eigen::VectorXd>& draws_per_input,
                   const std::function<double(double, double)>& true_quantile,
                   const std::vector<double>& input_grid);

// The 101-point equispaced input grid on [-1, 1] used for synthetic regimes.
std::vector<double> synthetic_input_grid();

EvalReport evaluate(const PredictiveEnsemble& ensemble, const Eigen::MatrixXd& y_true);

}  // namespace bdn
