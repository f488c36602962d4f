#include "bdn/gibbs.hpp"

#include <Eigen/Cholesky>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace bdn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// SPD factorization with diagonal jitter retries; signals ill-conditioning by
// throwing after five attempts.
Eigen::LLT<Eigen::MatrixXd> llt_with_jitter(Eigen::MatrixXd a) {
  double jitter = 1e-8;
  for (int attempt = 0; attempt < 5; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) return llt;
    a.diagonal().array() += jitter;
    jitter *= 10.0;
  }
  throw std::runtime_error("gibbs: SPD factorization failed after jitter retries");
}

// Draw from N(A^{-1} b, A^{-1}) given A = L L^T.
Eigen::VectorXd sample_gaussian_precision(const Eigen::LLT<Eigen::MatrixXd>& llt,
                                          const Eigen::VectorXd& b, RngStream& rng) {
  Eigen::VectorXd mu = llt.solve(b);
  Eigen::VectorXd z(b.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.next_normal();
  return mu + llt.matrixU().solve(z);
}

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw std::runtime_error(std::string("gibbs: non-finite ") + what);
}

}  // namespace

void GibbsConfig::validate() const {
  if (total_sweeps < 1 || burnin < 0 || burnin >= total_sweeps)
    throw std::invalid_argument("gibbs config: need 0 <= burnin < total_sweeps");
  if (thin < 1) throw std::invalid_argument("gibbs config: thinning must be >= 1");
  if (!(variance_floor > 0.0))
    throw std::invalid_argument("gibbs config: variance floor must be positive");
  if (pretrain_steps < 0 || !(pretrain_lr > 0.0))
    throw std::invalid_argument("gibbs config: bad pretrain settings");
}

AdjacentTruncatedNormalMixture mixture_conditional_v(const PiecewiseLinearActivation& act,
                                                     double prior_mean, double tau2,
                                                     double sigma2, double u_next) {
  if (!(tau2 > 0.0 && sigma2 > 0.0))
    throw std::invalid_argument("mixture_conditional_v: variances must be positive");
  const int J = act.segment_count();

  AdjacentTruncatedNormalMixture mix;
  mix.components.resize(J);
  mix.log_weights.resize(J);

  std::vector<double> lambda(J), omega2(J);
  for (int j = 0; j < J; ++j) {
    const double b = act.slope(j);
    const double bp = act.intercept(j);
    if (b == 0.0) {
      // Exact b -> 0 limit: the observation constrains v only through the
      // segment weight.
      omega2[j] = tau2;
      lambda[j] = prior_mean;
    } else {
      omega2[j] = 1.0 / (1.0 / tau2 + b * b / sigma2);
      lambda[j] = omega2[j] * (prior_mean / tau2 + b * (u_next - bp) / sigma2);
    }
    const double w = std::sqrt(omega2[j]);
    mix.components[j] = TruncatedNormalSpec{lambda[j], w, act.lower(j), act.upper(j)};
  }

  // Telescoping density-ratio recursion for the zeta factors, in log space.
  double log_zeta = 0.0;
  for (int j = 0; j < J; ++j) {
    if (j > 0) {
      const double c = act.lower(j);  // knot between segments j-1 and j
      const double lk_cur =
          normal_logpdf(u_next, c * act.slope(j) + act.intercept(j), sigma2);
      const double lk_prev =
          normal_logpdf(u_next, c * act.slope(j - 1) + act.intercept(j - 1), sigma2);
      const double lkt_prev = normal_logpdf(c, lambda[j - 1], omega2[j - 1]);
      const double lkt_cur = normal_logpdf(c, lambda[j], omega2[j]);
      log_zeta += lk_cur - lk_prev + lkt_prev - lkt_cur;
    }
    const double w = std::sqrt(omega2[j]);
    const double inf = std::numeric_limits<double>::infinity();
    const double lo = (j == 0) ? -inf : (act.lower(j) - lambda[j]) / w;
    const double hi = (j == J - 1) ? inf : (act.upper(j) - lambda[j]) / w;
    mix.log_weights[j] = normal_logcdf_diff(hi, lo) + log_zeta;
  }
  mix.normalize();
  return mix;
}

AdjacentTruncatedNormalMixture mixture_conditional_v(const PiecewiseLinearActivation& act,
                                                     const Eigen::VectorXd& u_row,
                                                     double u_next,
                                                     const Eigen::VectorXd& beta_row,
                                                     double gamma_k, double tau2,
                                                     double sigma2) {
  return mixture_conditional_v(act, gamma_k + beta_row.dot(u_row), tau2, sigma2, u_next);
}

void sample_v_layer(const NetworkShape& shape, LatentState& state, const ModelParams& params,
                    int l, const RngStream& rng) {
  const int L = shape.depth();
  if (l < 0 || l >= L)
    throw std::invalid_argument("sample_v_layer: v_L is observed, l must be < L");
  const auto& lp = params.layers[l];
  const int n_samples = static_cast<int>(state.u[l].rows());
  // Prior means for every (sample, unit) in one multiply.
  Eigen::MatrixXd prior_mean = state.u[l] * lp.weights.transpose();
  prior_mean.rowwise() += lp.biases.transpose();

#pragma omp parallel for schedule(static)
  for (int n = 0; n < n_samples; ++n) {
    RngStream rs = rng.fork(static_cast<std::uint64_t>(n));
    for (int k = 0; k < shape.v_dim(l); ++k) {
      const auto mix =
          mixture_conditional_v(shape.activation, prior_mean(n, k), lp.preact_var[k],
                                lp.postact_var[k], state.u[l + 1](n, k));
      state.v[l](n, k) = sample_mixture(mix, rs);
    }
  }
  check_finite(state.v[l], "v update");
}

void sample_u_layer(const NetworkShape& shape, LatentState& state, const ModelParams& params,
                    int l, const RngStream& rng) {
  const int L = shape.depth();
  if (l < 1 || l > L)
    throw std::invalid_argument("sample_u_layer: u_0 is observed, l must be in 1..L");
  const auto& lp = params.layers[l];
  const Eigen::VectorXd tau_inv = lp.preact_var.cwiseInverse();
  const Eigen::VectorXd sig_inv = params.layers[l - 1].postact_var.cwiseInverse();
  const int d = shape.u_dim(l);
  const int n_samples = static_cast<int>(state.u[l].rows());

  // Posterior precision is shared across samples; factor once per layer.
  const Eigen::MatrixXd w_scaled = tau_inv.asDiagonal() * lp.weights;
  Eigen::MatrixXd prec = lp.weights.transpose() * w_scaled;
  prec.diagonal() += sig_inv;
  const auto llt = llt_with_jitter(prec);

  const Eigen::MatrixXd h_prev = shape.activation(state.v[l - 1]);
  Eigen::MatrixXd rhs = (state.v[l].rowwise() - lp.biases.transpose()) * w_scaled;
  rhs += h_prev * sig_inv.asDiagonal();

#pragma omp parallel for schedule(static)
  for (int n = 0; n < n_samples; ++n) {
    RngStream rs = rng.fork(static_cast<std::uint64_t>(n));
    Eigen::VectorXd z(d);
    for (int i = 0; i < d; ++i) z[i] = rs.next_normal();
    state.u[l].row(n) =
        (llt.solve(rhs.row(n).transpose()) + llt.matrixU().solve(z)).transpose();
  }
  check_finite(state.u[l], "u update");
}

void sample_weights_layer(const NetworkShape& shape, const LatentState& state,
                          ModelParams& params, int l, const RngStream& rng) {
  auto& lp = params.layers[l];
  const int d = shape.u_dim(l);
  const int n_samples = static_cast<int>(state.u[l].rows());

  Eigen::MatrixXd design(n_samples, d + 1);
  design.leftCols(d) = state.u[l];
  design.col(d).setOnes();
  const Eigen::MatrixXd gram = design.transpose() * design;

  for (int k = 0; k < shape.v_dim(l); ++k) {
    RngStream rs = rng.fork(static_cast<std::uint64_t>(k));
    const double tau_inv = 1.0 / lp.preact_var[k];
    Eigen::MatrixXd prec = tau_inv * gram;
    prec.diagonal().head(d) += params.weight_hypervar[l].row(k).cwiseInverse();
    prec(d, d) += 1.0 / params.bias_hypervar[l][k];
    const Eigen::VectorXd b = tau_inv * (design.transpose() * state.v[l].col(k));
    const Eigen::VectorXd theta = sample_gaussian_precision(llt_with_jitter(prec), b, rs);
    lp.weights.row(k) = theta.head(d).transpose();
    lp.biases[k] = theta[d];
  }
  check_finite(lp.weights, "weight update");
}

void sample_variances_layer(const NetworkShape& shape, const LatentState& state,
                            ModelParams& params, const PriorConfig& prior, int l,
                            double variance_floor, RngStream& rng, FaultInjection fault) {
  const int L = shape.depth();
  auto& lp = params.layers[l];
  const double n_samples = static_cast<double>(state.u[l].rows());

  // Pre-activation (linear-layer) residuals drive tau2.
  Eigen::MatrixXd resid = state.v[l] - state.u[l] * lp.weights.transpose();
  resid.rowwise() -= lp.biases.transpose();
  for (int k = 0; k < shape.v_dim(l); ++k) {
    double rate = prior.b_preact + 0.5 * resid.col(k).squaredNorm();
    if (fault == FaultInjection::tau_rate_half) rate *= 0.5;
    lp.preact_var[k] = std::max(
        sample_inverse_gamma(prior.a_preact + 0.5 * n_samples, rate, rng), variance_floor);
  }

  // Activation residuals drive sigma2 (absent at the output layer).
  if (l < L) {
    const Eigen::MatrixXd act_resid = state.u[l + 1] - shape.activation(state.v[l]);
    for (int k = 0; k < shape.v_dim(l); ++k) {
      const double rate = prior.b_postact + 0.5 * act_resid.col(k).squaredNorm();
      lp.postact_var[k] = std::max(
          sample_inverse_gamma(prior.a_postact + 0.5 * n_samples, rate, rng), variance_floor);
    }
  }

  for (int k = 0; k < lp.weights.rows(); ++k)
    for (int kk = 0; kk < lp.weights.cols(); ++kk)
      params.weight_hypervar[l](k, kk) = std::max(
          sample_inverse_gamma(prior.a_weight + 0.5,
                               prior.b_weight + 0.5 * lp.weights(k, kk) * lp.weights(k, kk),
                               rng),
          variance_floor);
  for (int k = 0; k < lp.biases.size(); ++k)
    params.bias_hypervar[l][k] = std::max(
        sample_inverse_gamma(prior.a_bias + 0.5,
                             prior.b_bias + 0.5 * lp.biases[k] * lp.biases[k], rng),
        variance_floor);
}

void sample_variances(const NetworkShape& shape, const LatentState& state, ModelParams& params,
                      const PriorConfig& prior, double variance_floor, RngStream& rng,
                      FaultInjection fault) {
  for (int l = 0; l <= shape.depth(); ++l)
    sample_variances_layer(shape, state, params, prior, l, variance_floor, rng, fault);
}

double log_joint(const NetworkShape& shape, const LatentState& state,
                 const ModelParams& params, const PriorConfig& prior) {
  const int L = shape.depth();
  double total = 0.0;
  for (int l = 0; l <= L; ++l) {
    const auto& lp = params.layers[l];
    Eigen::MatrixXd mean = state.u[l] * lp.weights.transpose();
    mean.rowwise() += lp.biases.transpose();
    for (int k = 0; k < shape.v_dim(l); ++k) {
      const double var = lp.preact_var[k];
      for (Eigen::Index n = 0; n < state.v[l].rows(); ++n)
        total += normal_logpdf(state.v[l](n, k), mean(n, k), var);
    }
    if (l < L) {
      const Eigen::MatrixXd h_v = shape.activation(state.v[l]);
      for (int k = 0; k < shape.v_dim(l); ++k) {
        const double var = lp.postact_var[k];
        for (Eigen::Index n = 0; n < state.u[l + 1].rows(); ++n)
          total += normal_logpdf(state.u[l + 1](n, k), h_v(n, k), var);
      }
    }
    for (int k = 0; k < lp.weights.rows(); ++k)
      for (int kk = 0; kk < lp.weights.cols(); ++kk)
        total += normal_logpdf(lp.weights(k, kk), 0.0, params.weight_hypervar[l](k, kk)) +
                 inverse_gamma_logpdf(params.weight_hypervar[l](k, kk), prior.a_weight,
                                      prior.b_weight);
    for (int k = 0; k < lp.biases.size(); ++k)
      total += normal_logpdf(lp.biases[k], 0.0, params.bias_hypervar[l][k]) +
               inverse_gamma_logpdf(params.bias_hypervar[l][k], prior.a_bias, prior.b_bias);
    for (int k = 0; k < lp.preact_var.size(); ++k)
      total += inverse_gamma_logpdf(lp.preact_var[k], prior.a_preact, prior.b_preact);
    for (int k = 0; k < lp.postact_var.size(); ++k)
      total += inverse_gamma_logpdf(lp.postact_var[k], prior.a_postact, prior.b_postact);
  }
  return total;
}

SweepStats gibbs_sweep(const NetworkShape& shape, LatentState& state, ModelParams& params,
                       const PriorConfig& prior, double variance_floor, const RngStream& rng,
                       FaultInjection fault) {
  const int L = shape.depth();
  SweepStats stats;
  for (int l = 0; l <= L; ++l) {
    if (l < L) {
      auto t0 = Clock::now();
      sample_v_layer(shape, state, params, l, rng.fork(0, l));
      stats.t_v += seconds_since(t0);
      t0 = Clock::now();
      sample_u_layer(shape, state, params, l + 1, rng.fork(1, l + 1));
      stats.t_u += seconds_since(t0);
    }
    auto t0 = Clock::now();
    sample_weights_layer(shape, state, params, l, rng.fork(2, l));
    stats.t_wb += seconds_since(t0);
    t0 = Clock::now();
    RngStream var_rng = rng.fork(3, l);
    sample_variances_layer(shape, state, params, prior, l, variance_floor, var_rng, fault);
    stats.t_var += seconds_since(t0);
  }
  stats.log_joint = log_joint(shape, state, params, prior);
  if (!std::isfinite(stats.log_joint))
    throw std::runtime_error("gibbs: non-finite log joint density");
  return stats;
}

ModelParams draw_params_from_prior(const NetworkShape& shape, const PriorConfig& prior,
                                   RngStream& rng, double variance_floor) {
  const int L = shape.depth();
  ModelParams params;
  params.layers.resize(L + 1);
  params.weight_hypervar.resize(L + 1);
  params.bias_hypervar.resize(L + 1);
  for (int l = 0; l <= L; ++l) {
    const int rows = shape.v_dim(l), cols = shape.u_dim(l);
    auto& lp = params.layers[l];
    params.weight_hypervar[l].resize(rows, cols);
    params.bias_hypervar[l].resize(rows);
    lp.weights.resize(rows, cols);
    lp.biases.resize(rows);
    lp.preact_var.resize(rows);
    if (l < L) lp.postact_var.resize(rows);
    for (int k = 0; k < rows; ++k) {
      for (int kk = 0; kk < cols; ++kk) {
        const double rho2 = std::max(
            sample_inverse_gamma(prior.a_weight, prior.b_weight, rng), variance_floor);
        params.weight_hypervar[l](k, kk) = rho2;
        lp.weights(k, kk) = sample_normal(0.0, rho2, rng);
      }
      const double xi2 =
          std::max(sample_inverse_gamma(prior.a_bias, prior.b_bias, rng), variance_floor);
      params.bias_hypervar[l][k] = xi2;
      lp.biases[k] = sample_normal(0.0, xi2, rng);
      lp.preact_var[k] = std::max(
          sample_inverse_gamma(prior.a_preact, prior.b_preact, rng), variance_floor);
      if (l < L)
        lp.postact_var[k] = std::max(
            sample_inverse_gamma(prior.a_postact, prior.b_postact, rng), variance_floor);
    }
  }
  return params;
}

LatentState simulate_latents(const NetworkShape& shape, const ModelParams& params,
                             const Eigen::MatrixXd& x, const RngStream& rng) {
  const int L = shape.depth();
  const int n_samples = static_cast<int>(x.rows());
  LatentState state;
  state.u.resize(L + 1);
  state.v.resize(L + 1);
  for (int l = 0; l <= L; ++l) {
    state.u[l].resize(n_samples, shape.u_dim(l));
    state.v[l].resize(n_samples, shape.v_dim(l));
  }
  for (int n = 0; n < n_samples; ++n) {
    RngStream rs = rng.fork(static_cast<std::uint64_t>(n));
    ForwardTrace trace;
    forward_stochastic(shape, params, x.row(n).transpose(), rs, &trace);
    for (int l = 0; l <= L; ++l) {
      state.u[l].row(n) = trace.u[l].transpose();
      state.v[l].row(n) = trace.v[l].transpose();
    }
  }
  return state;
}

namespace {

ModelParams random_init(const NetworkShape& shape, RngStream& rng) {
  const int L = shape.depth();
  ModelParams params;
  params.layers.resize(L + 1);
  params.weight_hypervar.resize(L + 1);
  params.bias_hypervar.resize(L + 1);
  for (int l = 0; l <= L; ++l) {
    const int rows = shape.v_dim(l), cols = shape.u_dim(l);
    auto& lp = params.layers[l];
    lp.weights.resize(rows, cols);
    const double sd = 1.0 / std::sqrt(static_cast<double>(cols));
    for (int k = 0; k < rows; ++k)
      for (int kk = 0; kk < cols; ++kk) lp.weights(k, kk) = sd * rng.next_normal();
    lp.biases = Eigen::VectorXd::Zero(rows);
    lp.preact_var = Eigen::VectorXd::Constant(rows, 0.01);
    if (l < L) lp.postact_var = Eigen::VectorXd::Constant(rows, 0.01);
    params.weight_hypervar[l] = Eigen::MatrixXd::Ones(rows, cols);
    params.bias_hypervar[l] = Eigen::VectorXd::Ones(rows);
  }
  return params;
}

}  // namespace

ModelParams pretrain(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                     const NetworkShape& shape, int steps, double lr, RngStream& rng) {
  if (steps < 0) throw std::invalid_argument("pretrain: steps must be >= 0");
  ModelParams params = random_init(shape, rng);
  if (steps == 0) return params;

  const int L = shape.depth();
  const int n_samples = static_cast<int>(x.rows());
  const int batch = std::min(n_samples, 128);

  std::vector<Eigen::MatrixXd> m_w(L + 1), v_w(L + 1);
  std::vector<Eigen::VectorXd> m_b(L + 1), v_b(L + 1);
  for (int l = 0; l <= L; ++l) {
    m_w[l] = Eigen::MatrixXd::Zero(shape.v_dim(l), shape.u_dim(l));
    v_w[l] = m_w[l];
    m_b[l] = Eigen::VectorXd::Zero(shape.v_dim(l));
    v_b[l] = m_b[l];
  }
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  std::vector<Eigen::MatrixXd> acts(L + 1), preacts(L + 1);
  for (int step = 1; step <= steps; ++step) {
    Eigen::MatrixXd xb(batch, shape.input_dim), yb(batch, shape.output_dim);
    for (int i = 0; i < batch; ++i) {
      const int idx = static_cast<int>(rng.next_u64() % n_samples);
      xb.row(i) = x.row(idx);
      yb.row(i) = y.row(idx);
    }
    // Forward, retaining layer inputs and pre-activations.
    Eigen::MatrixXd a = xb;
    for (int l = 0; l <= L; ++l) {
      acts[l] = a;
      preacts[l] = a * params.layers[l].weights.transpose();
      preacts[l].rowwise() += params.layers[l].biases.transpose();
      if (l < L) a = shape.activation(preacts[l]);
    }
    // Backward.
    Eigen::MatrixXd dz =
        2.0 * (preacts[L] - yb) / static_cast<double>(batch * shape.output_dim);
    for (int l = L; l >= 0; --l) {
      const Eigen::MatrixXd gw = dz.transpose() * acts[l];
      const Eigen::VectorXd gb = dz.colwise().sum().transpose();
      if (l > 0) {
        Eigen::MatrixXd da = dz * params.layers[l].weights;
        dz.resize(batch, shape.v_dim(l - 1));
        for (int i = 0; i < batch; ++i)
          for (int k = 0; k < shape.v_dim(l - 1); ++k)
            dz(i, k) = da(i, k) * shape.activation.derivative(preacts[l - 1](i, k));
      }
      m_w[l] = beta1 * m_w[l] + (1.0 - beta1) * gw;
      v_w[l] = beta2 * v_w[l] + (1.0 - beta2) * gw.cwiseProduct(gw);
      m_b[l] = beta1 * m_b[l] + (1.0 - beta1) * gb;
      v_b[l] = beta2 * v_b[l] + (1.0 - beta2) * gb.cwiseProduct(gb);
      const double bc1 = 1.0 - std::pow(beta1, step);
      const double bc2 = 1.0 - std::pow(beta2, step);
      params.layers[l].weights.array() -=
          lr * (m_w[l].array() / bc1) / ((v_w[l].array() / bc2).sqrt() + eps);
      params.layers[l].biases.array() -=
          lr * (m_b[l].array() / bc1) / ((v_b[l].array() / bc2).sqrt() + eps);
    }
  }
  for (int l = 0; l <= L; ++l)
    if (!params.layers[l].weights.allFinite() || !params.layers[l].biases.allFinite())
      throw std::runtime_error("pretrain: non-finite parameters");
  return params;
}

SamplerState init_sampler(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          const NetworkShape& shape, const GibbsConfig& config) {
  shape.validate();
  config.validate();
  if (x.rows() != y.rows() || x.rows() < 1)
    throw std::invalid_argument("fit: features and targets must align, N >= 1");
  if (x.cols() != shape.input_dim || y.cols() != shape.output_dim)
    throw std::invalid_argument("fit: data dimensions do not match network shape");
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("fit: data contains NaN or Inf");

  RngStream init_rng = RngStream(config.seed).fork(0);
  SamplerState state;
  state.params = (config.init == GibbsConfig::Init::pretrain)
                     ? pretrain(x, y, shape, config.pretrain_steps, config.pretrain_lr,
                                init_rng)
                     : random_init(shape, init_rng);

  // Latents start at the deterministic trajectory, pinned to the data.
  const int L = shape.depth();
  const int n_samples = static_cast<int>(x.rows());
  state.latents.u.resize(L + 1);
  state.latents.v.resize(L + 1);
  for (int l = 0; l <= L; ++l) {
    state.latents.u[l].resize(n_samples, shape.u_dim(l));
    state.latents.v[l].resize(n_samples, shape.v_dim(l));
  }
  for (int n = 0; n < n_samples; ++n) {
    Eigen::VectorXd u = x.row(n).transpose();
    for (int l = 0; l <= L; ++l) {
      state.latents.u[l].row(n) = u.transpose();
      const Eigen::VectorXd v =
          state.params.layers[l].weights * u + state.params.layers[l].biases;
      state.latents.v[l].row(n) = v.transpose();
      if (l < L) u = shape.activation(v);
    }
  }
  state.latents.v[L] = y;
  state.sweeps_done = 0;
  return state;
}

void run_sweeps(const NetworkShape& shape, const PriorConfig& prior, const GibbsConfig& config,
                SamplerState& state, PosteriorChain& chain, FaultInjection fault) {
  const RngStream root(config.seed);
  for (int m = state.sweeps_done + 1; m <= config.total_sweeps; ++m) {
    SweepStats stats = gibbs_sweep(shape, state.latents, state.params, prior,
                                   config.variance_floor, root.fork(1, m), fault);
    stats.sweep = m;
    chain.stats.push_back(stats);
    if (m > config.burnin && (m - config.burnin) % config.thin == 0)
      chain.draws.push_back(state.params);
    state.sweeps_done = m;
  }
}

PosteriorChain fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   const NetworkShape& shape, const PriorConfig& prior,
                   const GibbsConfig& config, SamplerState* final_state) {
  prior.validate();
  SamplerState state = init_sampler(x, y, shape, config);
  PosteriorChain chain;
  run_sweeps(shape, prior, config, state, chain);
  if (final_state) *final_state = std::move(state);
  return chain;
}

}  // namespace bdn
