#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bdn/activation.hpp"
#include "bdn/rng.hpp"

namespace bdn {

// Network geometry. depth() = L is the number of hidden layers; linear layers
// are indexed l = 0..L. Layer l maps u_l (dim u_dim(l)) to v_l (dim v_dim(l)).
struct NetworkShape {
  int input_dim = 1;
  int output_dim = 1;
  std::vector<int> hidden;  // widths of the L hidden layers (may be empty)
  PiecewiseLinearActivation activation = PiecewiseLinearActivation::hard_tanh();

  int depth() const { return static_cast<int>(hidden.size()); }
  int u_dim(int l) const { return l == 0 ? input_dim : hidden[l - 1]; }
  int v_dim(int l) const { return l == depth() ? output_dim : hidden[l]; }
  void validate() const;
};

// One linear-noise-nonlinear-noise block. postact_var is empty at the output
// layer (no activation follows it).
struct LayerParams {
  Eigen::MatrixXd weights;     // v_dim(l) x u_dim(l)
  Eigen::VectorXd biases;      // v_dim(l)
  Eigen::VectorXd preact_var;  // v_dim(l), variance of v | u
  Eigen::VectorXd postact_var; // v_dim(l), variance of u_{l+1} | v; empty for l = L
};

// Full parameter set: per-layer weights/biases/noise variances plus the
// normal-inverse-gamma hypervariances of the weight and bias priors.
struct ModelParams {
  std::vector<LayerParams> layers;
  std::vector<Eigen::MatrixXd> weight_hypervar;  // same shape as weights
  std::vector<Eigen::VectorXd> bias_hypervar;    // same shape as biases

  void validate(const NetworkShape& shape) const;
};

// Inverse-gamma hyperprior (a, b) pairs for each variance family.
struct PriorConfig {
  double a_weight = 0.001, b_weight = 0.001;
  double a_bias = 0.001, b_bias = 0.001;
  double a_preact = 0.001, b_preact = 0.001;
  double a_postact = 0.001, b_postact = 0.001;

  void validate() const;
};

// Per-training-sample latent trajectories. u[0] is pinned to the features and
// v[L] to the targets; rows index samples.
struct LatentState {
  std::vector<Eigen::MatrixXd> u;  // u[l]: N x u_dim(l), l = 0..L
  std::vector<Eigen::MatrixXd> v;  // v[l]: N x v_dim(l), l = 0..L
};

// Posterior predictive draws plus the exact final-layer Gaussian component of
// each draw, enabling Rao-Blackwellized density evaluation.
struct PredictiveEnsemble {
  // One matrix per test point, each (M*R) x Q.
  std::vector<Eigen::MatrixXd> draws;
  std::vector<Eigen::MatrixXd> comp_mean;
  std::vector<Eigen::MatrixXd> comp_var;

  Eigen::MatrixXd mean() const;  // pooled predictive mean, n_points x Q
};

struct ForwardTrace {
  std::vector<Eigen::VectorXd> u;  // u_0..u_L
  std::vector<Eigen::VectorXd> v;  // v_0..v_L
};

// Standard DNN output g(x, Gamma): the forward pass with all noise removed.
Eigen::VectorXd forward_deterministic(const NetworkShape& shape, const ModelParams& params,
                                      const Eigen::VectorXd& x);

// One draw from the generative law; the trace records every latent value.
Eigen::VectorXd forward_stochastic(const NetworkShape& shape, const ModelParams& params,
                                   const Eigen::VectorXd& x, RngStream& rng,
                                   ForwardTrace* trace = nullptr);

// For each retained draw m and each r <= R, one stochastic forward pass per
// test point, with per-(draw, point, realization) RNG streams.
PredictiveEnsemble predict(const NetworkShape& shape, const std::vector<ModelParams>& chain,
                           const Eigen::MatrixXd& x_test, int realizations,
                           const RngStream& rng);

// Largest squared singular value, by power iteration.
double spectral_norm_sq(const Eigen::MatrixXd& m);

// Upper bound on Var(y|x) + [E(y|x) - g(x)]^2: per-layer noise totals scaled
// by downstream spectral norms and the activation's Lipschitz constant. The
// bound does not depend on x.
double variance_bound_general(const NetworkShape& shape, const ModelParams& params);

// Coarser product-form bound using global maxima of widths, weight norms, and
// noise variances. Requires lipschitz(activation) <= 1.
double variance_bound_simple(const NetworkShape& shape, const ModelParams& params);

// Average absolute central finite difference of the predictive mean with
// respect to one feature, using common random numbers across the two
// perturbations.
double influence(const NetworkShape& shape, const std::vector<ModelParams>& chain,
                 const Eigen::MatrixXd& x_test, int feature, double step,
                 int realizations, const RngStream& rng);

}  // namespace bdn
