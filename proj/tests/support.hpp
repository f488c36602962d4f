#pragma once

#include <functional>
#include <vector>

namespace testsup {

// One-sample Kolmogorov-Smirnov statistic against a CDF. Sorts a copy.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Asymptotic Kolmogorov p-value for statistic d at sample size n.
double ks_pvalue(double d, std::size_t n);

// Upper-tail probability of a chi-squared(k) variate.
double chi2_pvalue(double stat, int dof);

// Hartigan & Hartigan dip statistic: distance from the empirical CDF to the
// nearest unimodal CDF. Sorts a copy.
double dip_statistic(std::vector<double> sample);

double sample_skewness(const std::vector<double>& sample);

}  // namespace testsup
