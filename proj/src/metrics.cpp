#include "bdn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bdn/normal.hpp"

namespace bdn {

double empirical_quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("empirical_quantile: no draws");
  const auto n = static_cast<std::ptrdiff_t>(sorted.size());
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const auto lo = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor(h)), 0, n - 1);
  const auto hi = std::min<std::ptrdiff_t>(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[static_cast<std::size_t>(lo)] * (1.0 - frac) +
         sorted[static_cast<std::size_t>(hi)] * frac;
}

namespace {

void check_shapes(const PredictiveEnsemble& ensemble, const Eigen::MatrixXd& y_true,
                  const char* who) {
  if (static_cast<Eigen::Index>(ensemble.draws.size()) != y_true.rows() ||
      y_true.rows() == 0) {
    throw std::invalid_argument(std::string(who) + ": point count mismatch");
  }
  for (const auto& d : ensemble.draws) {
    if (d.cols() != y_true.cols() || d.rows() == 0) {
      throw std::invalid_argument(std::string(who) + ": draw shape mismatch");
    }
  }
}

}  // namespace

double rmse(const PredictiveEnsemble& ensemble, const Eigen::MatrixXd& y_true) {
  check_shapes(ensemble, y_true, "rmse");
  const Eigen::MatrixXd mu = ensemble.mean();
  return std::sqrt((mu - y_true).squaredNorm() / static_cast<double>(y_true.size()));
}

double nll(const PredictiveEnsemble& ensemble, const Eigen::MatrixXd& y_true) {
  check_shapes(ensemble, y_true, "nll");
  if (ensemble.comp_mean.size() != ensemble.draws.size()) {
    throw std::invalid_argument("nll: ensemble lacks component moments");
  }
  const Eigen::Index n = y_true.rows();
  const Eigen::Index q = y_true.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXd& cm = ensemble.comp_mean[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd& cv = ensemble.comp_var[static_cast<std::size_t>(i)];
    const Eigen::Index r = cm.rows();
    const double log_r = std::log(static_cast<double>(r));
    for (Eigen::Index k = 0; k < q; ++k) {
      double max_lp = -std::numeric_limits<double>::infinity();
      std::vector<double> lps(static_cast<std::size_t>(r));
      for (Eigen::Index j = 0; j < r; ++j) {
        const double lp = normal_logpdf(y_true(i, k), cm(j, k), cv(j, k));
        lps[static_cast<std::size_t>(j)] = lp;
        max_lp = std::max(max_lp, lp);
      }
      double s = 0.0;
      for (double lp : lps) s += std::exp(lp - max_lp);
      total += -(max_lp + std::log(s) - log_r);
    }
  }
  return total / static_cast<double>(n * q);
}

namespace {

struct IntervalStats {
  double covered_frac = 0.0;
  double mean_width = 0.0;
};

IntervalStats equal_tailed_interval(const PredictiveEnsemble& ensemble,
                                    const Eigen::MatrixXd& y_true, double level) {
  const Eigen::Index n = y_true.rows();
  const Eigen::Index q = y_true.cols();
  const double p_lo = (1.0 - level) / 2.0;
  const double p_hi = 1.0 - p_lo;
  std::ptrdiff_t covered = 0;
  double width_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::MatrixXd& d = ensemble.draws[static_cast<std::size_t>(i)];
    bool all_in = true;
    for (Eigen::Index k = 0; k < q; ++k) {
      std::vector<double> col(d.col(k).data(), d.col(k).data() + d.rows());
      std::sort(col.begin(), col.end());
      const double lo = empirical_quantile(col, p_lo);
      const double hi = empirical_quantile(col, p_hi);
      width_sum += hi - lo;
      if (y_true(i, k) < lo || y_true(i, k) > hi) all_in = false;
    }
    if (all_in) ++covered;
  }
  IntervalStats out;
  out.covered_frac = static_cast<double>(covered) / static_cast<double>(n);
  out.mean_width = width_sum / static_cast<double>(n * q);
  return out;
}

}  // namespace

double wepi(const PredictiveEnsemble& ensemble, const Eigen::MatrixXd& y_true,
            double target_coverage) {
  check_shapes(ensemble, y_true, "wepi");
  // Coverage is monotone in the nominal level, so binary-search the smallest
  // level whose empirical coverage reaches the target.
  const double full = equal_tailed_interval(ensemble, y_true, 1.0).covered_frac;
  if (full < target_coverage) return std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = 1.0;
  const double granularity = 1e-4;
  while (hi - lo > granularity) {
    const double mid = 0.5 * (lo + hi);
    if (equal_tailed_interval(ensemble, y_true, mid).covered_frac >= target_coverage) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return equal_tailed_interval(ensemble, y_true, hi).mean_width;
}

std::vector<std::pair<double, double>> coverage_curve(const PredictiveEnsemble& ensemble,
                                                      const Eigen::MatrixXd& y_true,
                                                      const std::vector<double>& levels) {
  check_shapes(ensemble, y_true, "coverage_curve");
  std::vector<std::pair<double, double>> out;
  out.reserve(levels.size());
  for (double level : levels) {
    out.emplace_back(level, equal_tailed_interval(ensemble, y_true, level).covered_frac);
  }
  return out;
}

std::vector<double> quantile_l1_p_grid() {
  std::vector<double> grid(100);
  for (int i = 0; i < 100; ++i) grid[static_cast<std::size_t>(i)] = 0.005 + 0.01 * i;
  return grid;
}

std::vector<double> synthetic_input_grid() {
  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[static_cast<std::size_t>(i)] = -1.0 + 0.02 * i;
  return grid;
}

double quantile_l1(const std::vector<Eigen::VectorXd>& draws_per_input,
                   const std::function<double(double, double)>& true_quantile,
                   const std::vector<double>& input_grid) {
  if (draws_per_input.size() != input_grid.size()) {
    throw std::invalid_argument("quantile_l1: grid and draw counts differ");
  }
  const std::vector<double> ps = quantile_l1_p_grid();
  double total = 0.0;
  for (std::size_t i = 0; i < input_grid.size(); ++i) {
    std::vector<double> sorted(draws_per_input[i].data(),
                               draws_per_input[i].data() + draws_per_input[i].size());
    std::sort(sorted.begin(), sorted.end());
    double gap = 0.0;
    for (double p : ps) {
      gap += std::abs(empirical_quantile(sorted, p) - true_quantile(input_grid[i], p));
    }
    total += gap / static_cast<double>(ps.size());
  }
  return total / static_cast<double>(input_grid.size());
}

EvalReport evaluate(const PredictiveEnsemble& ensemble, const Eigen::MatrixXd& y_true) {
  EvalReport report;
  report.rmse = rmse(ensemble, y_true);
  report.nll = nll(ensemble, y_true);
  report.wepi_95 = wepi(ensemble, y_true, 0.95);
  report.coverage = coverage_curve(ensemble, y_true, {0.5, 0.8, 0.9, 0.95, 0.99});
  return report;
}

}  // namespace bdn
