#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bdn {

// Per-column affine transform record; scales are always positive so the
// transform is invertible (constant columns get scale 1).
struct StandardizationRecord {
  Eigen::VectorXd x_mean, x_scale, y_mean, y_scale;
};

struct Dataset {
  Eigen::MatrixXd x;  // N x P
  Eigen::MatrixXd y;  // N x Q
  std::vector<std::string> x_names, y_names;
  // Ground-truth conditional quantile Q(x, p); null for real data.
  std::function<double(double, double)> quantile;
  std::optional<StandardizationRecord> standardization;

  int n() const { return static_cast<int>(x.rows()); }
};

struct SplitSpec {
  double train_fraction = 0.9;
  std::uint64_t seed = 0;
  int replicate = 0;

  void validate() const;
};

enum class SyntheticKind { heteroscedastic, skewed, multimodal };

SyntheticKind synthetic_kind_from_name(const std::string& name);
std::string to_string(SyntheticKind kind);

// Conditional median shared by all three regimes: the linear spline through
// (-1,0), (-0.5,1), (0,-1), (0.5,1), (1,0).
double synthetic_median(double x);

// x ~ Uniform[-1,1]; noise law by kind. The attached quantile handle is the
// exact analytic inverse CDF of the generative law.
Dataset gen_synthetic(SyntheticKind kind, int n, std::uint64_t seed);

// Ground-truth quantile function for a regime, available without data.
std::function<double(double, double)> synthetic_quantile(SyntheticKind kind);

struct CsvLoadReport {
  int rejected_rows = 0;
  std::vector<int> rejected_line_numbers;  // 1-based, header included
};

// Numeric CSV ingestion; rows with missing or non-numeric cells are dropped
// and reported, never imputed. target_cols are 0-based column indices.
Dataset load_csv(const std::string& path, const std::vector<int>& target_cols,
                 bool header, CsvLoadReport* report = nullptr);

void save_csv(const Dataset& ds, const std::string& path);

// Per-column z-scoring using this dataset's own statistics (call on the
// training split only).
Dataset standardize(const Dataset& ds);

// Apply an existing record (train statistics) to another dataset.
Dataset apply_standardization(const StandardizationRecord& record, const Dataset& ds);

Eigen::MatrixXd destandardize_predictions(const StandardizationRecord& record,
                                          const Eigen::MatrixXd& values);

// Seed-reproducible disjoint, exhaustive row partition.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

}  // namespace bdn
