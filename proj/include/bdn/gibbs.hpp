#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "bdn/distributions.hpp"
#include "bdn/model.hpp"
#include "bdn/rng.hpp"

namespace bdn {

struct GibbsConfig {
  int total_sweeps = 1000;
  int burnin = 500;
  int thin = 1;
  enum class Init { random, pretrain };
  Init init = Init::pretrain;
  int pretrain_steps = 2000;
  double pretrain_lr = 1e-3;
  double variance_floor = 1e-12;
  std::uint64_t seed = 0;

  void validate() const;
  int retained() const { return (total_sweeps - burnin) / thin; }
};

struct SweepStats {
  int sweep = 0;
  double log_joint = 0.0;
  // Per-block wall times in seconds.
  double t_v = 0.0, t_u = 0.0, t_wb = 0.0, t_var = 0.0;
};

struct PosteriorChain {
  std::vector<ModelParams> draws;
  std::vector<SweepStats> stats;
};

// Deliberate corruption of one conditional, for sampler-correctness
// sensitivity checks. tau_rate_half halves the rate of the preact-variance
// inverse-gamma update.
enum class FaultInjection { none, tau_rate_half };

// Theorem-1 conditional of a single pre-activation coordinate: prior
// N(prior_mean, tau2) combined with the downstream observation
// u_next ~ N(h(v), sigma2) yields a mixture of truncated normals on the
// activation's segments. Weights are accumulated in log space via the
// telescoping density-ratio recursion; zero-slope segments take the exact
// b -> 0 limit (component = prior, likelihood enters the weight only).
AdjacentTruncatedNormalMixture mixture_conditional_v(const PiecewiseLinearActivation& act,
                                                     double prior_mean, double tau2,
                                                     double sigma2, double u_next);

// Convenience overload matching the per-unit factorization: prior mean is
// gamma_k + beta_row . u_row.
AdjacentTruncatedNormalMixture mixture_conditional_v(const PiecewiseLinearActivation& act,
                                                     const Eigen::VectorXd& u_row,
                                                     double u_next,
                                                     const Eigen::VectorXd& beta_row,
                                                     double gamma_k, double tau2,
                                                     double sigma2);

// Resample v_l for every (sample, unit); l must be < L (v_L is the data).
void sample_v_layer(const NetworkShape& shape, LatentState& state, const ModelParams& params,
                    int l, const RngStream& rng);

// Resample u_l for every sample; l in 1..L (u_0 is the data). Gaussian
// conditional with a shared SPD factorization per layer; factorization
// failure is retried with diagonal jitter.
void sample_u_layer(const NetworkShape& shape, LatentState& state, const ModelParams& params,
                    int l, const RngStream& rng);

// Row-wise conjugate Bayesian linear-regression draw of (beta_l, gamma_l).
void sample_weights_layer(const NetworkShape& shape, const LatentState& state,
                          ModelParams& params, int l, const RngStream& rng);

// Inverse-gamma full conditionals for tau2/sigma2/rho2/xi2 of one layer,
// floored at variance_floor.
void sample_variances_layer(const NetworkShape& shape, const LatentState& state,
                            ModelParams& params, const PriorConfig& prior, int l,
                            double variance_floor, RngStream& rng,
                            FaultInjection fault = FaultInjection::none);

// All layers at once.
void sample_variances(const NetworkShape& shape, const LatentState& state, ModelParams& params,
                      const PriorConfig& prior, double variance_floor, RngStream& rng,
                      FaultInjection fault = FaultInjection::none);

double log_joint(const NetworkShape& shape, const LatentState& state,
                 const ModelParams& params, const PriorConfig& prior);

// One full pass in Algorithm order: per layer v, u, weights/biases, variances.
SweepStats gibbs_sweep(const NetworkShape& shape, LatentState& state, ModelParams& params,
                       const PriorConfig& prior, double variance_floor, const RngStream& rng,
                       FaultInjection fault = FaultInjection::none);

// Draw all parameters (including hypervariances) from the prior.
ModelParams draw_params_from_prior(const NetworkShape& shape, const PriorConfig& prior,
                                   RngStream& rng, double variance_floor = 1e-12);

// Generative draw of all latents and targets given parameters; u[0] is pinned
// to x, v[L] holds the simulated targets.
LatentState simulate_latents(const NetworkShape& shape, const ModelParams& params,
                             const Eigen::MatrixXd& x, const RngStream& rng);

// Minimize the deterministic forward MSE over weights/biases by Adam with
// hand-coded layer gradients. Noise variances start at 0.01, hypervariances
// at 1. steps = 0 returns the random initialization unchanged.
ModelParams pretrain(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                     const NetworkShape& shape, int steps, double lr, RngStream& rng);

// Full sampler state, checkpointable for resumed runs.
struct SamplerState {
  ModelParams params;
  LatentState latents;
  int sweeps_done = 0;
};

SamplerState init_sampler(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          const NetworkShape& shape, const GibbsConfig& config);

// Advance the sampler to config.total_sweeps, appending retained draws and
// telemetry. Sweep randomness is keyed by (seed, sweep index), so a resumed
// run is bit-identical to an uninterrupted one.
void run_sweeps(const NetworkShape& shape, const PriorConfig& prior, const GibbsConfig& config,
                SamplerState& state, PosteriorChain& chain,
                FaultInjection fault = FaultInjection::none);

PosteriorChain fit(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   const NetworkShape& shape, const PriorConfig& prior,
                   const GibbsConfig& config, SamplerState* final_state = nullptr);

}  // namespace bdn
