#include "bdn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bdn/normal.hpp"

namespace bdn {

double Grid1D::integrate(const Eigen::VectorXd& values) const {
  if (values.size() != n || n < 2) throw std::invalid_argument("Grid1D::integrate: bad size");
  const double h = step();
  return h * (values.sum() - 0.5 * (values(0) + values(n - 1)));
}

namespace {

double grid_moment(const Grid1D& grid, const Eigen::VectorXd& density, int order,
                   double center) {
  Eigen::VectorXd vals(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    vals(i) = density(i) * std::pow(grid.point(i) - center, order);
  }
  return grid.integrate(vals);
}

}  // namespace

double GridDensity::mean() const { return grid_moment(grid, density, 1, 0.0); }

double GridDensity::variance() const {
  const double m = mean();
  return grid_moment(grid, density, 2, m);
}

double GridDensity::mass(double a, double b) const {
  a = std::max(a, grid.lo);
  b = std::min(b, grid.hi);
  if (b <= a) return 0.0;
  const double h = grid.step();
  auto value_at = [&](double t) {
    const int j = std::clamp(static_cast<int>(std::floor((t - grid.lo) / h)), 0, grid.n - 2);
    const double frac = (t - grid.point(j)) / h;
    return density(j) * (1.0 - frac) + density(j + 1) * frac;
  };
  // Trapezoid over the whole grid points strictly inside (a, b), plus the
  // partial cells at either end.
  const int first = static_cast<int>(std::ceil((a - grid.lo) / h - 1e-12));
  const int last = static_cast<int>(std::floor((b - grid.lo) / h + 1e-12));
  double total = 0.0;
  if (first > last) {
    return 0.5 * (value_at(a) + value_at(b)) * (b - a);
  }
  for (int i = first; i < last; ++i) total += 0.5 * (density(i) + density(i + 1)) * h;
  total += 0.5 * (value_at(a) + density(first)) * (grid.point(first) - a);
  total += 0.5 * (density(last) + value_at(b)) * (b - grid.point(last));
  return total;
}

GridDensity grid_conditional_v(const PiecewiseLinearActivation& act, double prior_mean,
                               double tau2, double sigma2, double u_next, const Grid1D& grid) {
  if (grid.n < 2) throw std::invalid_argument("grid_conditional_v: need at least 2 points");
  Eigen::VectorXd logd(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double v = grid.point(i);
    logd(i) = normal_logpdf(v, prior_mean, tau2) + normal_logpdf(u_next, act(v), sigma2);
  }
  const double shift = logd.maxCoeff();
  GridDensity out;
  out.grid = grid;
  out.density = (logd.array() - shift).exp().matrix();
  const double raw = grid.integrate(out.density);
  if (!(raw > 0.0)) throw std::runtime_error("grid_conditional_v: zero mass on grid");
  out.density /= raw;
  out.log_norm = shift + std::log(raw);
  return out;
}

std::vector<double> grid_segment_masses(const PiecewiseLinearActivation& act,
                                        const GridDensity& density) {
  std::vector<double> masses;
  masses.reserve(static_cast<std::size_t>(act.segment_count()));
  for (int j = 0; j < act.segment_count(); ++j) {
    masses.push_back(density.mass(act.lower(j), act.upper(j)));
  }
  return masses;
}

double mixture_mean(const AdjacentTruncatedNormalMixture& mix) {
  double m = 0.0;
  for (std::size_t j = 0; j < mix.components.size(); ++j) {
    m += std::exp(mix.log_weights[j]) * truncated_normal_mean(mix.components[j]);
  }
  return m;
}

double mixture_variance(const AdjacentTruncatedNormalMixture& mix) {
  const double m = mixture_mean(mix);
  double s = 0.0;
  for (std::size_t j = 0; j < mix.components.size(); ++j) {
    const double cm = truncated_normal_mean(mix.components[j]);
    const double cv = truncated_normal_var(mix.components[j]);
    s += std::exp(mix.log_weights[j]) * (cv + (cm - m) * (cm - m));
  }
  return s;
}

double PredictiveDensityNumeric::mean() const { return grid_moment(grid, density, 1, 0.0); }

double PredictiveDensityNumeric::variance() const {
  const double m = mean();
  return grid_moment(grid, density, 2, m);
}

namespace {

// p(next) = integral p(cur) N(next | mean_fn(cur), var) dcur, tabulated on a
// fresh grid centered at `center` with half-width tail_scales * scale.
template <typename MeanFn>
std::pair<Grid1D, Eigen::VectorXd> propagate(const Grid1D& grid, const Eigen::VectorXd& dens,
                                             MeanFn mean_fn, double var, double center,
                                             double scale, double tail_scales, int n) {
  Grid1D out_grid{center - tail_scales * scale, center + tail_scales * scale, n};
  Eigen::VectorXd means(grid.n);
  for (int j = 0; j < grid.n; ++j) means(j) = mean_fn(grid.point(j));
  Eigen::VectorXd out(n);
  const double h = grid.step();
  const double inv2v = 0.5 / var;
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);
  for (int i = 0; i < n; ++i) {
    const double t = out_grid.point(i);
    double acc = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      const double d = t - means(j);
      double w = dens(j) * std::exp(-d * d * inv2v);
      if (j == 0 || j == grid.n - 1) w *= 0.5;
      acc += w;
    }
    out(i) = acc * h * norm;
  }
  const double raw = out_grid.integrate(out);
  if (!(raw > 0.0)) throw std::runtime_error("predictive_density_numeric: mass escaped grid");
  out /= raw;
  return {out_grid, out};
}

}  // namespace

PredictiveDensityNumeric predictive_density_numeric(const NetworkShape& shape,
                                                    const ModelParams& params, double x,
                                                    int grid_points, double tail_scales) {
  shape.validate();
  params.validate(shape);
  if (shape.input_dim != 1 || shape.output_dim != 1 ||
      std::any_of(shape.hidden.begin(), shape.hidden.end(), [](int w) { return w != 1; })) {
    throw std::invalid_argument("predictive_density_numeric: all widths must be 1");
  }
  const int L = shape.depth();
  const auto& act = shape.activation;
  const double lip = act.lipschitz();

  // Deterministic trajectory for grid centers, accumulated noise scale for
  // grid half-widths.
  auto beta = [&](int l) { return params.layers[static_cast<std::size_t>(l)].weights(0, 0); };
  auto gamma = [&](int l) { return params.layers[static_cast<std::size_t>(l)].biases(0); };
  auto tau2 = [&](int l) { return params.layers[static_cast<std::size_t>(l)].preact_var(0); };
  auto sigma2 = [&](int l) { return params.layers[static_cast<std::size_t>(l)].postact_var(0); };

  // First pre-activation: v_0 ~ N(beta_0 x + gamma_0, tau2_0), tabulated
  // directly.
  double center = beta(0) * x + gamma(0);
  double scale = std::sqrt(tau2(0));
  Grid1D grid{center - tail_scales * scale, center + tail_scales * scale, grid_points};
  Eigen::VectorXd dens(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    dens(i) = std::exp(normal_logpdf(grid.point(i), center, tau2(0)));
  }
  dens /= grid.integrate(dens);

  for (int l = 0; l < L; ++l) {
    // u_{l+1} | v_l ~ N(h(v_l), sigma2_l)
    const double u_center = act(center);
    const double u_scale = std::sqrt(lip * lip * scale * scale + sigma2(l));
    std::tie(grid, dens) = propagate(
        grid, dens, [&](double v) { return act(v); }, sigma2(l), u_center, u_scale,
        tail_scales, grid_points);
    center = u_center;
    scale = u_scale;
    // v_{l+1} | u_{l+1} ~ N(beta u + gamma, tau2_{l+1})
    const double b = beta(l + 1);
    const double g = gamma(l + 1);
    const double v_center = b * center + g;
    const double v_scale = std::sqrt(b * b * scale * scale + tau2(l + 1));
    std::tie(grid, dens) = propagate(
        grid, dens, [&](double u) { return b * u + g; }, tau2(l + 1), v_center, v_scale,
        tail_scales, grid_points);
    center = v_center;
    scale = v_scale;
  }

  PredictiveDensityNumeric out;
  out.grid = grid;
  out.density = dens;
  return out;
}

namespace {

struct SummaryAccumulator {
  std::vector<double> values;
};

std::vector<std::string> summary_names() {
  return {"mean_weight_sq", "mean_bias_sq", "mean_log_preact_var", "mean_log_postact_var",
          "y_mean", "y_sq_mean"};
}

std::vector<double> summaries(const NetworkShape& shape, const ModelParams& params,
                              const LatentState& latents) {
  const int L = shape.depth();
  double wsq = 0.0, wcount = 0.0, bsq = 0.0, bcount = 0.0;
  double ltau = 0.0, ltau_count = 0.0, lsig = 0.0, lsig_count = 0.0;
  for (int l = 0; l <= L; ++l) {
    const auto& layer = params.layers[static_cast<std::size_t>(l)];
    wsq += layer.weights.squaredNorm();
    wcount += static_cast<double>(layer.weights.size());
    bsq += layer.biases.squaredNorm();
    bcount += static_cast<double>(layer.biases.size());
    ltau += layer.preact_var.array().log().sum();
    ltau_count += static_cast<double>(layer.preact_var.size());
    if (l < L) {
      lsig += layer.postact_var.array().log().sum();
      lsig_count += static_cast<double>(layer.postact_var.size());
    }
  }
  const Eigen::MatrixXd& y = latents.v[static_cast<std::size_t>(L)];
  return {wsq / wcount,
          bsq / bcount,
          ltau / ltau_count,
          lsig_count > 0.0 ? lsig / lsig_count : 0.0,
          y.mean(),
          y.array().square().mean()};
}

// Standard error by batch means (handles the autocorrelation of the
// successive-conditional chain; for iid input it just loses a little
// efficiency).
double batch_means_se(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  const std::size_t n_batches = std::max<std::size_t>(
      10, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
  const std::size_t batch = std::max<std::size_t>(1, n / n_batches);
  std::vector<double> means;
  for (std::size_t start = 0; start + batch <= n; start += batch) {
    double s = 0.0;
    for (std::size_t i = start; i < start + batch; ++i) s += xs[i];
    means.push_back(s / static_cast<double>(batch));
  }
  const double m = std::accumulate(means.begin(), means.end(), 0.0) /
                   static_cast<double>(means.size());
  double var = 0.0;
  for (double v : means) var += (v - m) * (v - m);
  var /= static_cast<double>(means.size() - 1);
  return std::sqrt(var / static_cast<double>(means.size()));
}

double vec_mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

std::vector<GewekeStat> geweke_compare(const NetworkShape& shape, const GewekeConfig& config,
                                       FaultInjection fault) {
  shape.validate();
  config.prior.validate();
  if (config.rounds < 100) throw std::invalid_argument("geweke_compare: rounds too small");

  // Fixed design shared by both simulators.
  RngStream xr = RngStream(config.seed, 0xDA7A);
  Eigen::MatrixXd x(config.n_obs, shape.input_dim);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index k = 0; k < x.cols(); ++k) x(i, k) = 2.0 * xr.next_uniform() - 1.0;
  }

  const auto names = summary_names();
  std::vector<std::vector<double>> marginal(names.size()), successive(names.size());

  // Marginal-conditional: independent exact joint draws.
  const RngStream mc_root(config.seed, 0x6E11E);
  for (int r = 0; r < config.rounds; ++r) {
    RngStream rr = mc_root.fork(1, static_cast<std::uint64_t>(r));
    ModelParams params = draw_params_from_prior(shape, config.prior, rr, config.variance_floor);
    LatentState latents = simulate_latents(shape, params, x, rr.fork(2));
    const auto s = summaries(shape, params, latents);
    for (std::size_t k = 0; k < names.size(); ++k) marginal[k].push_back(s[k]);
  }

  // Successive-conditional: start from an exact joint draw, then alternate a
  // Gibbs sweep (conditional on the current data) with a fresh data redraw
  // (conditional on the current parameters). Each kernel preserves the joint
  // law iff the conditionals are implemented correctly.
  const RngStream sc_root(config.seed, 0x5C11E);
  RngStream init = sc_root.fork(0);
  ModelParams params = draw_params_from_prior(shape, config.prior, init, config.variance_floor);
  LatentState latents = simulate_latents(shape, params, x, init.fork(1));
  int step = 0;
  for (int r = 0; r < config.rounds; ++r) {
    for (int t = 0; t < config.thin; ++t, ++step) {
      RngStream sr = sc_root.fork(1, static_cast<std::uint64_t>(step));
      gibbs_sweep(shape, latents, params, config.prior, config.variance_floor, sr.fork(0),
                  fault);
      latents = simulate_latents(shape, params, x, sr.fork(1));
    }
    const auto s = summaries(shape, params, latents);
    for (std::size_t k = 0; k < names.size(); ++k) successive[k].push_back(s[k]);
  }

  std::vector<GewekeStat> out;
  for (std::size_t k = 0; k < names.size(); ++k) {
    GewekeStat st;
    st.name = names[k];
    st.marginal_mean = vec_mean(marginal[k]);
    st.marginal_se = batch_means_se(marginal[k]);
    st.successive_mean = vec_mean(successive[k]);
    st.successive_se = batch_means_se(successive[k]);
    const double denom =
        std::sqrt(st.marginal_se * st.marginal_se + st.successive_se * st.successive_se);
    st.z = denom > 0.0 ? (st.marginal_mean - st.successive_mean) / denom : 0.0;
    out.push_back(st);
  }
  return out;
}

}  // namespace bdn
