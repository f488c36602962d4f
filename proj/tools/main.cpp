#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "bdn/checkpoint.hpp"
#include "bdn/data.hpp"
#include "bdn/gibbs.hpp"
#include "bdn/metrics.hpp"
#include "bdn/model.hpp"
#include "bdn/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Post-parse configuration problems that should exit with the usage code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataArgs {
  std::string csv;
  std::string manifest;
  std::vector<int> target_cols;
  bool no_header = false;
};

void add_data_flags(CLI::App* cmd, DataArgs& args, bool need_targets) {
  cmd->add_option("--data", args.csv, "input CSV path");
  cmd->add_option("--from-manifest", args.manifest,
                  "dataset manifest JSON (alternative to --data)");
  if (need_targets) {
    cmd->add_option("--target-col", args.target_cols,
                    "0-based target column indices (default: last column)");
  }
  cmd->add_flag("--no-header", args.no_header, "CSV has no header row");
}

// Resolves --data/--from-manifest to a dataset. With use_targets the target
// columns (default: last) become y; otherwise every column is a feature.
bdn::Dataset load_input(const DataArgs& args, bool use_targets,
                        bdn::DatasetManifest* manifest_out = nullptr) {
  std::string csv = args.csv;
  bdn::DatasetManifest manifest;
  if (!args.manifest.empty()) {
    if (!csv.empty()) throw UsageError("give --data or --from-manifest, not both");
    manifest = bdn::load_manifest(args.manifest);
    csv = (fs::path(args.manifest).parent_path() / manifest.csv_path).string();
  } else if (csv.empty()) {
    throw UsageError("one of --data or --from-manifest is required");
  } else {
    manifest.kind = "csv";
    manifest.csv_path = csv;
  }
  // Probe the width by loading with a provisional last-column target.
  bdn::CsvLoadReport report;
  bdn::Dataset probe = bdn::load_csv(csv, {0}, !args.no_header, &report);
  const int n_cols = static_cast<int>(probe.x.cols()) + 1;
  if (report.rejected_rows > 0) {
    std::cerr << "note: dropped " << report.rejected_rows
              << " malformed row(s) from " << csv << "\n";
  }

  bdn::Dataset ds;
  if (use_targets) {
    std::vector<int> targets = args.target_cols;
    if (targets.empty()) targets = {n_cols - 1};
    ds = bdn::load_csv(csv, targets, !args.no_header);
  } else {
    if (!args.target_cols.empty()) throw UsageError("this command takes no --target-col");
    ds = bdn::load_csv(csv, {n_cols - 1}, !args.no_header);
    // Fold the provisional target back in: it was the last column, so
    // feature order is preserved.
    bdn::Dataset all;
    all.x.resize(ds.x.rows(), n_cols);
    all.x << ds.x, ds.y;
    all.x_names = ds.x_names;
    all.x_names.insert(all.x_names.end(), ds.y_names.begin(), ds.y_names.end());
    all.y.resize(ds.x.rows(), 0);
    ds = std::move(all);
  }
  if (manifest.kind != "csv") {
    ds.quantile = bdn::synthetic_quantile(bdn::synthetic_kind_from_name(manifest.kind));
  }
  if (manifest_out) *manifest_out = manifest;
  return ds;
}

bdn::PiecewiseLinearActivation make_activation(const std::string& name, double leaky_slope) {
  try {
    return bdn::PiecewiseLinearActivation::builtin(name, leaky_slope);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Destandardize ensemble draws and mixture components in place.
void destandardize_ensemble(const bdn::StandardizationRecord& rec,
                            bdn::PredictiveEnsemble& ens) {
  for (std::size_t i = 0; i < ens.draws.size(); ++i) {
    for (Eigen::Index k = 0; k < ens.draws[i].cols(); ++k) {
      const double s = rec.y_scale(k), m = rec.y_mean(k);
      ens.draws[i].col(k) = (ens.draws[i].col(k).array() * s + m).matrix();
      if (!ens.comp_mean.empty()) {
        ens.comp_mean[i].col(k) = (ens.comp_mean[i].col(k).array() * s + m).matrix();
        ens.comp_var[i].col(k) *= s * s;
      }
    }
  }
}

json report_to_json(const bdn::EvalReport& report) {
  json cov = json::array();
  for (const auto& [level, emp] : report.coverage) {
    cov.push_back(json{{"nominal", level}, {"empirical", emp}});
  }
  json j{{"rmse", report.rmse},
         {"nll", report.nll},
         {"wepi_95", std::isfinite(report.wepi_95) ? json(report.wepi_95) : json(nullptr)},
         {"coverage", std::move(cov)}};
  if (report.quantile_l1) j["quantile_l1"] = *report.quantile_l1;
  return j;
}

std::string report_to_csv(const bdn::EvalReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "metric,value\n";
  out << "rmse," << report.rmse << "\n";
  out << "nll," << report.nll << "\n";
  out << "wepi_95," << report.wepi_95 << "\n";
  if (report.quantile_l1) out << "quantile_l1," << *report.quantile_l1 << "\n";
  for (const auto& [level, emp] : report.coverage) {
    out << "coverage_" << level << "," << emp << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- generate

int cmd_generate(const std::string& kind_name, int n, std::uint64_t seed,
                 const std::string& out_dir) {
  bdn::SyntheticKind kind;
  try {
    kind = bdn::synthetic_kind_from_name(kind_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (n <= 0) throw UsageError("--n must be positive");
  fs::create_directories(out_dir);
  bdn::Dataset ds = bdn::gen_synthetic(kind, n, seed);
  const std::string base = bdn::to_string(kind);
  bdn::save_csv(ds, (fs::path(out_dir) / (base + ".csv")).string());
  bdn::DatasetManifest manifest;
  manifest.kind = base;
  manifest.n = n;
  manifest.seed = seed;
  manifest.csv_path = base + ".csv";
  bdn::save_manifest(manifest, (fs::path(out_dir) / (base + ".manifest.json")).string());
  std::cout << "wrote " << n << " rows to " << (fs::path(out_dir) / (base + ".csv")).string()
            << "\n";
  return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  DataArgs data;
  std::vector<int> hidden{50, 50, 50, 50};
  std::string activation = "hard_tanh";
  double leaky_slope = 0.01;
  double prior_a = 0.001, prior_b = 0.001;
  bdn::GibbsConfig gibbs;
  std::string init = "pretrain";
  double train_fraction = 0.9;
  int replicate = 0;
  bool no_standardize = false;
  std::string out_dir;
  std::string resume;
};

int cmd_train(const TrainArgs& args, const std::string& effective_config) {
  const auto t0 = std::chrono::steady_clock::now();

  bdn::GibbsConfig gibbs = args.gibbs;
  if (args.init == "pretrain") {
    gibbs.init = bdn::GibbsConfig::Init::pretrain;
  } else if (args.init == "random") {
    gibbs.init = bdn::GibbsConfig::Init::random;
  } else {
    throw UsageError("--init must be pretrain or random");
  }
  try {
    gibbs.validate();  // reject bad sweep/burnin combos before touching data
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);
  write_text(out / "effective_config.toml", effective_config);

  bdn::Dataset full = load_input(args.data, true);
  bdn::SplitSpec split_spec;
  split_spec.train_fraction = args.train_fraction;
  split_spec.seed = gibbs.seed;
  split_spec.replicate = args.replicate;
  try {
    split_spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  auto [train_raw, test_raw] = bdn::split(full, split_spec);
  bdn::save_csv(train_raw, (out / "train.csv").string());
  if (test_raw.n() > 0) bdn::save_csv(test_raw, (out / "test.csv").string());

  std::optional<bdn::StandardizationRecord> record;
  bdn::Dataset train = train_raw;
  if (!args.no_standardize) {
    train = bdn::standardize(train_raw);
    record = train.standardization;
  }

  bdn::NetworkShape shape;
  bdn::PriorConfig prior;
  bdn::Checkpoint ckpt;
  bdn::PosteriorChain chain;

  if (!args.resume.empty()) {
    ckpt = bdn::load_checkpoint(args.resume);
    shape = ckpt.shape;
    prior = ckpt.prior;
    gibbs = ckpt.gibbs;
    gibbs.total_sweeps = args.gibbs.total_sweeps;  // allow extending the run
    if (gibbs.total_sweeps < ckpt.state.sweeps_done) {
      throw UsageError("--sweeps is below the checkpoint's completed sweep count");
    }
    record = ckpt.standardization;
    if (record) train = bdn::apply_standardization(*record, train_raw);
    for (std::size_t i = 0; i < ckpt.draws.size(); ++i) {
      chain.draws.push_back(ckpt.draws[i]);
      bdn::SweepStats st;
      st.log_joint = ckpt.log_joint[i];
      chain.stats.push_back(st);
    }
  } else {
    shape.input_dim = static_cast<int>(train.x.cols());
    shape.output_dim = static_cast<int>(train.y.cols());
    shape.hidden = args.hidden;
    shape.activation = make_activation(args.activation, args.leaky_slope);
    prior = bdn::PriorConfig{args.prior_a, args.prior_b, args.prior_a, args.prior_b,
                             args.prior_a, args.prior_b, args.prior_a, args.prior_b};
  }
  try {
    shape.validate();
    prior.validate();
    gibbs.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (args.resume.empty()) ckpt.state = bdn::init_sampler(train.x, train.y, shape, gibbs);
  if (!args.resume.empty() &&
      (ckpt.state.latents.u[0].rows() != train.x.rows() ||
       ckpt.state.latents.u[0].cols() != train.x.cols())) {
    throw std::runtime_error("resume data does not match the checkpoint's training data");
  }

  bdn::run_sweeps(shape, prior, gibbs, ckpt.state, chain);

  ckpt.shape = shape;
  ckpt.prior = prior;
  ckpt.gibbs = gibbs;
  ckpt.standardization = record;
  ckpt.draws = chain.draws;
  ckpt.log_joint.clear();
  for (const auto& st : chain.stats) {
    const int m = st.sweep;
    if (!args.resume.empty() && st.sweep == 0) {
      ckpt.log_joint.push_back(st.log_joint);  // carried over from the loaded chain
      continue;
    }
    if (m > gibbs.burnin && (m - gibbs.burnin) % gibbs.thin == 0) {
      ckpt.log_joint.push_back(st.log_joint);
    }
  }
  bdn::save_checkpoint(ckpt, (out / "checkpoint.json").string());

  std::ostringstream log;
  log.precision(17);
  log << "sweep,log_joint,t_v,t_u,t_weights,t_variances\n";
  for (const auto& st : chain.stats) {
    if (st.sweep == 0) continue;
    log << st.sweep << "," << st.log_joint << "," << st.t_v << "," << st.t_u << ","
        << st.t_wb << "," << st.t_var << "\n";
  }
  write_text(out / "sweeps.csv", log.str());

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "retained " << ckpt.draws.size() << " draws in " << secs << " s\n";
  return 0;
}

// ----------------------------------------------------------------- predict

bdn::PredictiveEnsemble predict_raw_space(const bdn::Checkpoint& ckpt,
                                          const Eigen::MatrixXd& x_raw, int realizations,
                                          std::uint64_t seed) {
  if (x_raw.cols() != ckpt.shape.input_dim) {
    throw std::runtime_error("feature count " + std::to_string(x_raw.cols()) +
                             " does not match checkpoint input dimension " +
                             std::to_string(ckpt.shape.input_dim));
  }
  if (ckpt.draws.empty()) throw std::runtime_error("checkpoint holds no retained draws");
  Eigen::MatrixXd x = x_raw;
  if (ckpt.standardization) {
    const auto& r = *ckpt.standardization;
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
      x.col(k) = ((x.col(k).array() - r.x_mean(k)) / r.x_scale(k)).matrix();
    }
  }
  bdn::PredictiveEnsemble ens = bdn::predict(ckpt.shape, ckpt.draws, x, realizations,
                                             bdn::RngStream(seed, 0x9D1C7));
  if (ckpt.standardization) destandardize_ensemble(*ckpt.standardization, ens);
  return ens;
}

int cmd_predict(const std::string& ckpt_path, const DataArgs& data, int realizations,
                const std::vector<double>& quantiles, bool write_draws, std::uint64_t seed,
                const std::string& out_dir) {
  if (realizations <= 0) throw UsageError("--realizations must be positive");
  for (double q : quantiles) {
    if (q <= 0.0 || q >= 1.0) throw UsageError("quantiles must lie in (0, 1)");
  }
  const bdn::Checkpoint ckpt = bdn::load_checkpoint(ckpt_path);
  const bdn::Dataset ds = load_input(data, false);
  const bdn::PredictiveEnsemble ens = predict_raw_space(ckpt, ds.x, realizations, seed);

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  std::ostringstream sum;
  sum.precision(17);
  sum << "point";
  const int q_dim = ckpt.shape.output_dim;
  for (int k = 0; k < q_dim; ++k) {
    sum << ",mean_" << k << ",sd_" << k;
    for (double q : quantiles) sum << ",q" << q << "_" << k;
  }
  sum << "\n";
  for (std::size_t i = 0; i < ens.draws.size(); ++i) {
    sum << i;
    for (int k = 0; k < q_dim; ++k) {
      const Eigen::VectorXd col = ens.draws[i].col(k);
      const double mean = col.mean();
      const double sd = std::sqrt((col.array() - mean).square().sum() /
                                  std::max<double>(1.0, static_cast<double>(col.size() - 1)));
      std::vector<double> sorted(col.data(), col.data() + col.size());
      std::sort(sorted.begin(), sorted.end());
      sum << "," << mean << "," << sd;
      for (double q : quantiles) sum << "," << bdn::empirical_quantile(sorted, q);
    }
    sum << "\n";
  }
  write_text(out / "summary.csv", sum.str());

  if (write_draws) {
    std::ostringstream dr;
    dr.precision(17);
    dr << "point,draw";
    for (int k = 0; k < q_dim; ++k) dr << ",y_" << k;
    dr << "\n";
    for (std::size_t i = 0; i < ens.draws.size(); ++i) {
      for (Eigen::Index j = 0; j < ens.draws[i].rows(); ++j) {
        dr << i << "," << j;
        for (int k = 0; k < q_dim; ++k) dr << "," << ens.draws[i](j, k);
        dr << "\n";
      }
    }
    write_text(out / "draws.csv", dr.str());
  }
  std::cout << "wrote predictions for " << ens.draws.size() << " points ("
            << ens.draws.front().rows() << " draws each)\n";
  return 0;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(const std::string& ckpt_path, const DataArgs& data, int realizations,
                 bool want_quantile_l1, std::uint64_t seed, const std::string& out_dir) {
  if (realizations <= 0) throw UsageError("--realizations must be positive");
  const bdn::Checkpoint ckpt = bdn::load_checkpoint(ckpt_path);
  bdn::DatasetManifest manifest;
  const bdn::Dataset ds = load_input(data, true, &manifest);
  if (ds.y.cols() != ckpt.shape.output_dim) {
    throw std::runtime_error("target count does not match checkpoint output dimension");
  }
  if (want_quantile_l1 && !ds.quantile) {
    throw UsageError("--quantile-l1 needs a synthetic --from-manifest with ground truth");
  }

  const bdn::PredictiveEnsemble ens = predict_raw_space(ckpt, ds.x, realizations, seed);
  bdn::EvalReport report = bdn::evaluate(ens, ds.y);

  if (want_quantile_l1) {
    if (ckpt.shape.input_dim != 1 || ckpt.shape.output_dim != 1) {
      throw UsageError("--quantile-l1 is defined for 1-d input, 1-d output models");
    }
    const std::vector<double> grid = bdn::synthetic_input_grid();
    Eigen::MatrixXd gx(static_cast<Eigen::Index>(grid.size()), 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      gx(static_cast<Eigen::Index>(i), 0) = grid[i];
    }
    const bdn::PredictiveEnsemble gens =
        predict_raw_space(ckpt, gx, realizations, seed + 1);
    std::vector<Eigen::VectorXd> draws;
    draws.reserve(grid.size());
    for (const auto& d : gens.draws) draws.emplace_back(d.col(0));
    report.quantile_l1 = bdn::quantile_l1(draws, ds.quantile, grid);
  }

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  write_text(out / "report.json", report_to_json(report).dump(1) + "\n");
  write_text(out / "report.csv", report_to_csv(report));
  std::cout << report_to_json(report).dump(1) << "\n";
  return 0;
}

// ------------------------------------------------------------------- check

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

void check_mixture_vs_grid(std::vector<CheckResult>& results, std::uint64_t seed) {
  const std::vector<std::string> acts{"relu", "leaky_relu", "hard_tanh", "hard_sigmoid"};
  bdn::RngStream rng(seed, 0xC4EC1);
  for (const auto& name : acts) {
    const auto act = bdn::PiecewiseLinearActivation::builtin(name);
    double worst_mass = 0.0, worst_moment = 0.0;
    for (int t = 0; t < 10; ++t) {
      const double m = 3.0 * rng.next_normal();
      const double tau2 = std::exp(1.5 * rng.next_normal());
      const double sigma2 = std::exp(1.5 * rng.next_normal());
      const double u = act(m) + 2.0 * rng.next_normal();
      auto mix = bdn::mixture_conditional_v(act, m, tau2, sigma2, u);
      const double span = 12.0 * std::sqrt(tau2) + 12.0;
      const bdn::Grid1D grid{m - span, m + span, 40001};
      const auto gd = bdn::grid_conditional_v(act, m, tau2, sigma2, u, grid);
      const auto masses = bdn::grid_segment_masses(act, gd);
      for (std::size_t j = 0; j < masses.size(); ++j) {
        worst_mass = std::max(worst_mass,
                              std::abs(masses[j] - std::exp(mix.log_weights[j])));
      }
      worst_moment = std::max(
          worst_moment, std::abs(bdn::mixture_mean(mix) - gd.mean()) /
                            std::max(1.0, std::abs(gd.mean())));
      worst_moment = std::max(worst_moment,
                              std::abs(bdn::mixture_variance(mix) - gd.variance()) /
                                  std::max(1e-8, gd.variance()));
    }
    CheckResult r;
    r.name = "mixture_vs_grid/" + name;
    r.pass = worst_mass < 1e-4 && worst_moment < 1e-3;
    std::ostringstream d;
    d << "max mass err " << worst_mass << ", max moment rel err " << worst_moment;
    r.detail = d.str();
    results.push_back(r);
  }
}

void check_density_vs_mc(std::vector<CheckResult>& results, int rounds, std::uint64_t seed) {
  const int n_models = 3;
  const int n_draws = std::min(200000, std::max(20000, rounds * 20));
  bdn::RngStream rng(seed, 0xDE4517);
  double worst_ks = 0.0;
  for (int t = 0; t < n_models; ++t) {
    bdn::NetworkShape shape;
    shape.hidden = {1, 1};
    shape.activation = bdn::PiecewiseLinearActivation::hard_tanh();
    bdn::PriorConfig prior{3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0};
    bdn::RngStream pr = rng.fork(7, static_cast<std::uint64_t>(t));
    const bdn::ModelParams params = bdn::draw_params_from_prior(shape, prior, pr);
    const double x = 2.0 * pr.next_uniform() - 1.0;
    const auto pd = bdn::predictive_density_numeric(shape, params, x, 2048);
    std::vector<double> draws(static_cast<std::size_t>(n_draws));
    for (int i = 0; i < n_draws; ++i) {
      bdn::RngStream dr = rng.fork(8, static_cast<std::uint64_t>(t) * 1000003 + i);
      Eigen::VectorXd xv(1);
      xv(0) = x;
      draws[static_cast<std::size_t>(i)] = bdn::forward_stochastic(shape, params, xv, dr)(0);
    }
    std::sort(draws.begin(), draws.end());
    // Quadrature CDF by cumulative trapezoid, then KS against the sample.
    Eigen::VectorXd cdf(pd.grid.n);
    cdf(0) = 0.0;
    const double h = pd.grid.step();
    for (int i = 1; i < pd.grid.n; ++i) {
      cdf(i) = cdf(i - 1) + 0.5 * (pd.density(i - 1) + pd.density(i)) * h;
    }
    cdf /= cdf(pd.grid.n - 1);
    double ks = 0.0;
    for (int i = 0; i < n_draws; ++i) {
      const double y = draws[static_cast<std::size_t>(i)];
      double f;
      if (y <= pd.grid.lo) {
        f = 0.0;
      } else if (y >= pd.grid.hi) {
        f = 1.0;
      } else {
        const int j = static_cast<int>((y - pd.grid.lo) / h);
        const double frac = (y - pd.grid.point(j)) / h;
        f = cdf(j) * (1.0 - frac) + cdf(std::min(j + 1, pd.grid.n - 1)) * frac;
      }
      ks = std::max(ks, std::abs(f - (i + 0.5) / n_draws));
    }
    worst_ks = std::max(worst_ks, ks);
  }
  CheckResult r;
  r.name = "predictive_density_vs_mc";
  r.pass = worst_ks < 0.01;
  std::ostringstream d;
  d << "max KS distance " << worst_ks << " over " << n_models << " models, " << n_draws
    << " draws";
  r.detail = d.str();
  results.push_back(r);
}

void check_geweke(std::vector<CheckResult>& results, int rounds, std::uint64_t seed,
                  bdn::FaultInjection fault) {
  bdn::NetworkShape shape;
  shape.hidden = {2};
  shape.activation = bdn::PiecewiseLinearActivation::hard_tanh();
  bdn::GewekeConfig config;
  config.rounds = rounds;
  config.n_obs = 3;
  config.seed = seed;
  const auto stats = bdn::geweke_compare(shape, config, fault);
  for (const auto& st : stats) {
    CheckResult r;
    r.name = "geweke/" + st.name;
    r.pass = std::abs(st.z) < 4.0;
    std::ostringstream d;
    d << "z = " << st.z << " (marginal " << st.marginal_mean << " +- " << st.marginal_se
      << ", successive " << st.successive_mean << " +- " << st.successive_se << ")";
    r.detail = d.str();
    results.push_back(r);
  }
}

int cmd_check(int rounds, const std::string& fault_name, std::uint64_t seed) {
  if (rounds < 0) throw UsageError("--rounds must be >= 0");
  bdn::FaultInjection fault = bdn::FaultInjection::none;
  if (fault_name == "tau-rate-half") {
    fault = bdn::FaultInjection::tau_rate_half;
  } else if (!fault_name.empty() && fault_name != "none") {
    throw UsageError("unknown --fault-inject '" + fault_name + "'");
  }
  std::vector<CheckResult> results;
  if (rounds > 0) {
    check_mixture_vs_grid(results, seed);
    check_density_vs_mc(results, rounds, seed);
    check_geweke(results, rounds, seed, fault);
  }
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  " << r.detail << "\n";
    if (!r.pass) ++failures;
  }
  std::cout << results.size() << " checks, " << failures << " failed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"B-DeepNoise: deep regression with closed-form Gibbs-sampled latent noise"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV + manifest");
  std::string gen_kind;
  int gen_n = 1000;
  std::uint64_t gen_seed = 1;
  std::string gen_out = ".";
  gen->add_option("--kind", gen_kind, "heteroscedastic | skewed | multimodal")->required();
  gen->add_option("--n", gen_n, "number of rows");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "output directory");

  // train
  auto* tr = app.add_subcommand("train", "run the Gibbs sampler and write a checkpoint");
  TrainArgs ta;
  app.set_config("--config", "",
                 "TOML config file; subcommand options live in a section such as "
                 "[train]; flags override file values");
  add_data_flags(tr, ta.data, true);
  tr->add_option("--hidden", ta.hidden, "hidden layer widths")->delimiter(',');
  tr->add_option("--activation", ta.activation,
                 "relu | leaky_relu | hard_tanh | hard_sigmoid");
  tr->add_option("--leaky-slope", ta.leaky_slope, "slope for leaky_relu");
  tr->add_option("--prior-a", ta.prior_a, "inverse-gamma shape for all variances");
  tr->add_option("--prior-b", ta.prior_b, "inverse-gamma rate for all variances");
  tr->add_option("--sweeps", ta.gibbs.total_sweeps, "total Gibbs sweeps");
  tr->add_option("--burnin", ta.gibbs.burnin, "sweeps discarded before retention");
  tr->add_option("--thin", ta.gibbs.thin, "retain every thin-th sweep after burn-in");
  tr->add_option("--init", ta.init, "pretrain | random");
  tr->add_option("--pretrain-steps", ta.gibbs.pretrain_steps, "Adam steps for init");
  tr->add_option("--pretrain-lr", ta.gibbs.pretrain_lr, "Adam learning rate");
  tr->add_option("--variance-floor", ta.gibbs.variance_floor, "lower clamp on variances");
  tr->add_option("--seed", ta.gibbs.seed, "master seed");
  tr->add_option("--train-fraction", ta.train_fraction, "train split fraction");
  tr->add_option("--replicate", ta.replicate, "split replicate index");
  tr->add_flag("--no-standardize", ta.no_standardize, "skip per-column z-scoring");
  tr->add_option("--out", ta.out_dir, "output directory")->required();
  tr->add_option("--resume", ta.resume, "checkpoint to continue from");

  // predict
  auto* pr = app.add_subcommand("predict", "posterior predictive draws for a feature CSV");
  std::string pr_ckpt, pr_out = ".";
  DataArgs pr_data;
  int pr_realizations = 1;
  std::vector<double> pr_quantiles{0.025, 0.5, 0.975};
  bool pr_draws = false;
  std::uint64_t pr_seed = 0;
  pr->add_option("--checkpoint", pr_ckpt, "trained checkpoint")->required();
  add_data_flags(pr, pr_data, false);
  pr->add_option("--realizations", pr_realizations, "stochastic passes per retained draw");
  pr->add_option("--quantiles", pr_quantiles, "summary quantiles")->delimiter(',');
  pr->add_flag("--write-draws", pr_draws, "also write the full draw matrix");
  pr->add_option("--seed", pr_seed, "prediction seed");
  pr->add_option("--out", pr_out, "output directory");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "score a checkpoint on labeled data");
  std::string ev_ckpt, ev_out = ".";
  DataArgs ev_data;
  int ev_realizations = 1;
  bool ev_ql1 = false;
  std::uint64_t ev_seed = 0;
  ev->add_option("--checkpoint", ev_ckpt, "trained checkpoint")->required();
  add_data_flags(ev, ev_data, true);
  ev->add_option("--realizations", ev_realizations, "stochastic passes per retained draw");
  ev->add_flag("--quantile-l1", ev_ql1,
               "also report the quantile gap against synthetic ground truth");
  ev->add_option("--seed", ev_seed, "prediction seed");
  ev->add_option("--out", ev_out, "output directory");

  // check
  auto* ck = app.add_subcommand("check", "run the sampler-correctness oracle suites");
  int ck_rounds = 2000;
  std::string ck_fault = "none";
  std::uint64_t ck_seed = 1;
  ck->add_option("--rounds", ck_rounds, "simulation rounds (0 = empty report)");
  ck->add_option("--fault-inject", ck_fault, "none | tau-rate-half");
  ck->add_option("--seed", ck_seed, "check seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_kind, gen_n, gen_seed, gen_out);
    if (tr->parsed()) return cmd_train(ta, tr->config_to_str(true, true));
    if (pr->parsed()) {
      return cmd_predict(pr_ckpt, pr_data, pr_realizations, pr_quantiles, pr_draws, pr_seed,
                         pr_out);
    }
    if (ev->parsed()) {
      return cmd_evaluate(ev_ckpt, ev_data, ev_realizations, ev_ql1, ev_seed, ev_out);
    }
    if (ck->parsed()) return cmd_check(ck_rounds, ck_fault, ck_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
