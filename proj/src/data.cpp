#include "bdn/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bdn/normal.hpp"
#include "bdn/rng.hpp"

namespace bdn {

namespace {

double skew_scale(double x) { return 0.2 + 0.8 * (1.0 + x) / 2.0; }

// Two-piece (split) normal noise for the skewed regime: smooth density with
// one heavy flank; the heavy side switches at x = 0 so skewness flips sign.
void skew_sides(double x, double* sl, double* sr) {
  const double s = skew_scale(x);
  if (x >= 0.0) {
    *sl = 0.4 * s;
    *sr = 1.2 * s;
  } else {
    *sl = 1.2 * s;
    *sr = 0.4 * s;
  }
}

double two_piece_quantile(double sl, double sr, double p) {
  const double split = sl / (sl + sr);  // CDF at the join point
  if (p <= split) return sl * normal_quantile(p * (sl + sr) / (2.0 * sl));
  return sr * normal_quantile((p * (sl + sr) - (sl - sr)) / (2.0 * sr));
}
double hetero_scale(double x) { return 0.1 + 0.9 * x * x; }
double multimodal_offset(double x) { return 0.5 + 0.5 * x; }
constexpr double kMultimodalSd = 0.3;

double multimodal_cdf(double x, double t) {
  if (x <= 0.0) return normal_cdf(t / kMultimodalSd);
  const double d = multimodal_offset(x);
  return 0.5 * (normal_cdf((t - d) / kMultimodalSd) + normal_cdf((t + d) / kMultimodalSd));
}

double multimodal_noise_quantile(double x, double p) {
  if (x <= 0.0) return kMultimodalSd * normal_quantile(p);
  double lo = -multimodal_offset(x) - 8.0 * kMultimodalSd;
  double hi = multimodal_offset(x) + 8.0 * kMultimodalSd;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (multimodal_cdf(x, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool parse_double(const std::string& s, double* out) {
  if (s.empty()) return false;
  try {
    std::size_t pos = 0;
    *out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size() && std::isfinite(*out);
  } catch (...) {
    return false;
  }
}

// RFC-4180-style field split: quoted fields may contain commas and doubled
// quotes.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("split: train fraction must lie in (0,1)");
}

SyntheticKind synthetic_kind_from_name(const std::string& name) {
  if (name == "heteroscedastic") return SyntheticKind::heteroscedastic;
  if (name == "skewed") return SyntheticKind::skewed;
  if (name == "multimodal") return SyntheticKind::multimodal;
  throw std::invalid_argument("unknown synthetic kind: " + name);
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::heteroscedastic: return "heteroscedastic";
    case SyntheticKind::skewed: return "skewed";
    case SyntheticKind::multimodal: return "multimodal";
  }
  return "";
}

double synthetic_median(double x) {
  static const double knots[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  static const double values[] = {0.0, 1.0, -1.0, 1.0, 0.0};
  if (x <= knots[0]) return values[0];
  for (int i = 0; i < 4; ++i)
    if (x <= knots[i + 1]) {
      const double t = (x - knots[i]) / (knots[i + 1] - knots[i]);
      return values[i] + t * (values[i + 1] - values[i]);
    }
  return values[4];
}

std::function<double(double, double)> synthetic_quantile(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::heteroscedastic:
      return [](double x, double p) {
        return synthetic_median(x) + hetero_scale(x) * normal_quantile(p);
      };
    case SyntheticKind::skewed:
      return [](double x, double p) {
        double sl = 0.0, sr = 0.0;
        skew_sides(x, &sl, &sr);
        const double q =
            two_piece_quantile(sl, sr, p) - two_piece_quantile(sl, sr, 0.5);
        return synthetic_median(x) + q;
      };
    case SyntheticKind::multimodal:
      return [](double x, double p) {
        return synthetic_median(x) + multimodal_noise_quantile(x, p);
      };
  }
  throw std::invalid_argument("synthetic_quantile: bad kind");
}

Dataset gen_synthetic(SyntheticKind kind, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_synthetic: n must be >= 1");
  RngStream rng(seed, 0x5D47A);
  Dataset ds;
  ds.x.resize(n, 1);
  ds.y.resize(n, 1);
  ds.x_names = {"x"};
  ds.y_names = {"y"};
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * rng.next_uniform() - 1.0;
    const double med = synthetic_median(x);
    double noise = 0.0;
    switch (kind) {
      case SyntheticKind::heteroscedastic:
        noise = hetero_scale(x) * rng.next_normal();
        break;
      case SyntheticKind::skewed: {
        double sl = 0.0, sr = 0.0;
        skew_sides(x, &sl, &sr);
        noise = two_piece_quantile(sl, sr, rng.next_uniform()) -
                two_piece_quantile(sl, sr, 0.5);
        break;
      }
      case SyntheticKind::multimodal: {
        double center = 0.0;
        if (x > 0.0) center = (rng.next_uniform() < 0.5) ? multimodal_offset(x)
                                                         : -multimodal_offset(x);
        noise = center + kMultimodalSd * rng.next_normal();
        break;
      }
    }
    ds.x(i, 0) = x;
    ds.y(i, 0) = med + noise;
  }
  ds.quantile = synthetic_quantile(kind);
  return ds;
}

Dataset load_csv(const std::string& path, const std::vector<int>& target_cols, bool header,
                 CsvLoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);
  if (target_cols.empty()) throw std::invalid_argument("load_csv: need target columns");

  std::string line;
  int line_no = 0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  CsvLoadReport local;
  int n_cols = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (line_no == 1 && header) {
      for (const auto& f : fields) names.push_back(trim(f));
      n_cols = static_cast<int>(fields.size());
      continue;
    }
    if (n_cols < 0) n_cols = static_cast<int>(fields.size());
    std::vector<double> row(fields.size());
    bool ok = static_cast<int>(fields.size()) == n_cols;
    for (std::size_t i = 0; ok && i < fields.size(); ++i)
      ok = parse_double(trim(fields[i]), &row[i]);
    if (ok) {
      rows.push_back(std::move(row));
    } else {
      local.rejected_rows += 1;
      local.rejected_line_numbers.push_back(line_no);
    }
  }
  if (rows.empty()) throw std::runtime_error("load_csv: no usable rows in " + path);
  for (int t : target_cols)
    if (t < 0 || t >= n_cols)
      throw std::invalid_argument("load_csv: target column out of range");
  if (names.empty())
    for (int i = 0; i < n_cols; ++i) names.push_back("col" + std::to_string(i));

  std::vector<bool> is_target(n_cols, false);
  for (int t : target_cols) is_target[t] = true;

  Dataset ds;
  const int n = static_cast<int>(rows.size());
  const int q = static_cast<int>(target_cols.size());
  ds.x.resize(n, n_cols - q);
  ds.y.resize(n, q);
  for (int c = 0, xi = 0; c < n_cols; ++c)
    if (!is_target[c]) {
      ds.x_names.push_back(names[c]);
      for (int r = 0; r < n; ++r) ds.x(r, xi) = rows[r][c];
      ++xi;
    }
  for (int t = 0; t < q; ++t) {
    ds.y_names.push_back(names[target_cols[t]]);
    for (int r = 0; r < n; ++r) ds.y(r, t) = rows[r][target_cols[t]];
  }
  if (report) *report = local;
  return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot write " + path);
  out.precision(17);
  for (std::size_t i = 0; i < ds.x_names.size(); ++i) out << ds.x_names[i] << ",";
  for (std::size_t i = 0; i < ds.y_names.size(); ++i)
    out << ds.y_names[i] << (i + 1 < ds.y_names.size() ? "," : "\n");
  for (int r = 0; r < ds.n(); ++r) {
    for (int c = 0; c < ds.x.cols(); ++c) out << ds.x(r, c) << ",";
    for (int c = 0; c < ds.y.cols(); ++c)
      out << ds.y(r, c) << (c + 1 < ds.y.cols() ? "," : "\n");
  }
}

namespace {
void column_stats(const Eigen::MatrixXd& m, Eigen::VectorXd* mean, Eigen::VectorXd* scale) {
  *mean = m.colwise().mean();
  scale->resize(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double var =
        (m.col(c).array() - (*mean)[c]).square().sum() / std::max<double>(1, m.rows() - 1);
    (*scale)[c] = var > 0.0 ? std::sqrt(var) : 1.0;  // constant columns unchanged
  }
}

Eigen::MatrixXd apply_cols(const Eigen::MatrixXd& m, const Eigen::VectorXd& mean,
                           const Eigen::VectorXd& scale) {
  Eigen::MatrixXd out = m;
  out.rowwise() -= mean.transpose();
  out.array().rowwise() /= scale.transpose().array();
  return out;
}
}  // namespace

Dataset standardize(const Dataset& ds) {
  StandardizationRecord rec;
  column_stats(ds.x, &rec.x_mean, &rec.x_scale);
  column_stats(ds.y, &rec.y_mean, &rec.y_scale);
  return apply_standardization(rec, ds);
}

Dataset apply_standardization(const StandardizationRecord& record, const Dataset& ds) {
  Dataset out = ds;
  out.x = apply_cols(ds.x, record.x_mean, record.x_scale);
  out.y = apply_cols(ds.y, record.y_mean, record.y_scale);
  out.standardization = record;
  return out;
}

Eigen::MatrixXd destandardize_predictions(const StandardizationRecord& record,
                                          const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = values;
  out.array().rowwise() *= record.y_scale.transpose().array();
  out.rowwise() += record.y_mean.transpose();
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  spec.validate();
  const int n = ds.n();
  const int n_train = static_cast<int>(std::lround(spec.train_fraction * n));
  if (n_train < 1 || n_train >= n)
    throw std::invalid_argument("split: degenerate split sizes");

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  RngStream rng(spec.seed, 0x5B117 + static_cast<std::uint64_t>(spec.replicate));
  for (int i = n - 1; i > 0; --i)
    std::swap(idx[i], idx[rng.next_u64() % static_cast<std::uint64_t>(i + 1)]);

  auto take = [&](int from, int count) {
    Dataset out;
    out.x.resize(count, ds.x.cols());
    out.y.resize(count, ds.y.cols());
    out.x_names = ds.x_names;
    out.y_names = ds.y_names;
    out.quantile = ds.quantile;
    for (int i = 0; i < count; ++i) {
      out.x.row(i) = ds.x.row(idx[from + i]);
      out.y.row(i) = ds.y.row(idx[from + i]);
    }
    return out;
  };
  return {take(0, n_train), take(n_train, n - n_train)};
}

}  // namespace bdn
