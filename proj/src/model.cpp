#include "bdn/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bdn {

void NetworkShape::validate() const {
  if (input_dim < 1 || output_dim < 1)
    throw std::invalid_argument("shape: input/output dims must be positive");
  for (int w : hidden)
    if (w < 1) throw std::invalid_argument("shape: hidden widths must be positive");
}

void ModelParams::validate(const NetworkShape& shape) const {
  const int L = shape.depth();
  if (static_cast<int>(layers.size()) != L + 1 ||
      static_cast<int>(weight_hypervar.size()) != L + 1 ||
      static_cast<int>(bias_hypervar.size()) != L + 1)
    throw std::invalid_argument("params: expected L+1 layers");
  for (int l = 0; l <= L; ++l) {
    const auto& lp = layers[l];
    if (lp.weights.rows() != shape.v_dim(l) || lp.weights.cols() != shape.u_dim(l) ||
        lp.biases.size() != shape.v_dim(l) || lp.preact_var.size() != shape.v_dim(l))
      throw std::invalid_argument("params: layer shape mismatch");
    if (l < L && lp.postact_var.size() != shape.v_dim(l))
      throw std::invalid_argument("params: postact_var shape mismatch");
    if (l == L && lp.postact_var.size() != 0)
      throw std::invalid_argument("params: output layer has no postact_var");
    if ((lp.preact_var.array() <= 0.0).any() ||
        (l < L && (lp.postact_var.array() <= 0.0).any()))
      throw std::invalid_argument("params: variances must be positive");
    if (weight_hypervar[l].rows() != lp.weights.rows() ||
        weight_hypervar[l].cols() != lp.weights.cols() ||
        bias_hypervar[l].size() != lp.biases.size())
      throw std::invalid_argument("params: hypervariance shape mismatch");
  }
}

void PriorConfig::validate() const {
  for (double v : {a_weight, b_weight, a_bias, b_bias, a_preact, b_preact, a_postact,
                   b_postact})
    if (!(v > 0.0)) throw std::invalid_argument("prior: hyperparameters must be positive");
}

Eigen::MatrixXd PredictiveEnsemble::mean() const {
  if (draws.empty()) throw std::invalid_argument("ensemble: empty");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(draws.size()), draws[0].cols());
  for (std::size_t i = 0; i < draws.size(); ++i) out.row(i) = draws[i].colwise().mean();
  return out;
}

Eigen::VectorXd forward_deterministic(const NetworkShape& shape, const ModelParams& params,
                                      const Eigen::VectorXd& x) {
  if (x.size() != shape.input_dim)
    throw std::invalid_argument("forward: feature dimension mismatch");
  const int L = shape.depth();
  Eigen::VectorXd u = x;
  for (int l = 0; l <= L; ++l) {
    Eigen::VectorXd v = params.layers[l].weights * u + params.layers[l].biases;
    if (l == L) return v;
    u = shape.activation(v);
  }
  return u;  // unreachable
}

Eigen::VectorXd forward_stochastic(const NetworkShape& shape, const ModelParams& params,
                                   const Eigen::VectorXd& x, RngStream& rng,
                                   ForwardTrace* trace) {
  if (x.size() != shape.input_dim)
    throw std::invalid_argument("forward: feature dimension mismatch");
  const int L = shape.depth();
  if (trace) {
    trace->u.assign(L + 1, {});
    trace->v.assign(L + 1, {});
  }
  Eigen::VectorXd u = x;
  Eigen::VectorXd v;
  for (int l = 0; l <= L; ++l) {
    if (trace) trace->u[l] = u;
    const auto& lp = params.layers[l];
    v = lp.weights * u + lp.biases;
    for (Eigen::Index k = 0; k < v.size(); ++k)
      v[k] += std::sqrt(lp.preact_var[k]) * rng.next_normal();
    if (trace) trace->v[l] = v;
    if (l == L) break;
    u = shape.activation(v);
    for (Eigen::Index k = 0; k < u.size(); ++k)
      u[k] += std::sqrt(lp.postact_var[k]) * rng.next_normal();
  }
  return v;
}

PredictiveEnsemble predict(const NetworkShape& shape, const std::vector<ModelParams>& chain,
                           const Eigen::MatrixXd& x_test, int realizations,
                           const RngStream& rng) {
  if (chain.empty()) throw std::invalid_argument("predict: empty chain");
  if (realizations < 1) throw std::invalid_argument("predict: realizations must be >= 1");
  if (x_test.cols() != shape.input_dim)
    throw std::invalid_argument("predict: feature dimension mismatch");
  const int L = shape.depth();
  const int n_points = static_cast<int>(x_test.rows());
  const int M = static_cast<int>(chain.size());
  const int C = M * realizations;

  PredictiveEnsemble ens;
  ens.draws.assign(n_points, Eigen::MatrixXd(C, shape.output_dim));
  ens.comp_mean.assign(n_points, Eigen::MatrixXd(C, shape.output_dim));
  ens.comp_var.assign(n_points, Eigen::MatrixXd(C, shape.output_dim));

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_points; ++i) {
    const Eigen::VectorXd x = x_test.row(i).transpose();
    for (int m = 0; m < M; ++m) {
      const auto& lp_out = chain[m].layers[L];
      for (int r = 0; r < realizations; ++r) {
        RngStream s = rng.fork(static_cast<std::uint64_t>(m),
                               static_cast<std::uint64_t>(i) * realizations + r);
        ForwardTrace trace;
        const Eigen::VectorXd y = forward_stochastic(shape, chain[m], x, s, &trace);
        const int c = m * realizations + r;
        ens.draws[i].row(c) = y.transpose();
        ens.comp_mean[i].row(c) = (lp_out.weights * trace.u[L] + lp_out.biases).transpose();
        ens.comp_var[i].row(c) = lp_out.preact_var.transpose();
      }
    }
  }
  return ens;
}

double spectral_norm_sq(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.cols()).normalized();
  double prev = 0.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd w = m.transpose() * (m * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::fabs(norm - prev) <= 1e-10 * std::max(1.0, norm)) return norm;
    prev = norm;
  }
  return prev;
}

double variance_bound_general(const NetworkShape& shape, const ModelParams& params) {
  const int L = shape.depth();
  const double ch = shape.activation.lipschitz();
  std::vector<double> d2(L + 1);
  for (int l = 0; l <= L; ++l) d2[l] = spectral_norm_sq(params.layers[l].weights);

  double bound = 0.0;
  for (int l = 0; l <= L; ++l) {
    const double sigma_sum = (l == 0) ? 0.0 : params.layers[l - 1].postact_var.sum();
    double term = d2[l] * sigma_sum + params.layers[l].preact_var.sum();
    for (int lp = l + 1; lp <= L; ++lp) term *= d2[lp];
    bound += term * std::pow(ch, 2.0 * (L - l));
  }
  return bound;
}

double variance_bound_simple(const NetworkShape& shape, const ModelParams& params) {
  if (shape.activation.lipschitz() > 1.0)
    throw std::invalid_argument("variance_bound_simple: activation not 1-Lipschitz");
  const int L = shape.depth();
  double K = std::max(shape.input_dim, shape.output_dim);
  for (int w : shape.hidden) K = std::max(K, static_cast<double>(w));
  double d2 = 0.0, sig2 = 0.0, tau2 = 0.0;
  for (int l = 0; l <= L; ++l) {
    d2 = std::max(d2, spectral_norm_sq(params.layers[l].weights));
    tau2 = std::max(tau2, params.layers[l].preact_var.maxCoeff());
    if (l < L) sig2 = std::max(sig2, params.layers[l].postact_var.maxCoeff());
  }
  // L+1 weight layers contribute, so the term count is L+1, not L.
  return K * (L + 1) * (std::pow(d2, L) + 1.0) * (d2 + 1.0) * (sig2 + tau2);
}

double influence(const NetworkShape& shape, const std::vector<ModelParams>& chain,
                 const Eigen::MatrixXd& x_test, int feature, double step,
                 int realizations, const RngStream& rng) {
  if (feature < 0 || feature >= shape.input_dim)
    throw std::invalid_argument("influence: feature index out of range");
  if (!(step > 0.0)) throw std::invalid_argument("influence: step must be positive");
  Eigen::MatrixXd plus = x_test, minus = x_test;
  plus.col(feature).array() += step;
  minus.col(feature).array() -= step;
  // Identical rng roots ensure common random numbers across the perturbations.
  const Eigen::MatrixXd mp = predict(shape, chain, plus, realizations, rng).mean();
  const Eigen::MatrixXd mm = predict(shape, chain, minus, realizations, rng).mean();
  return ((mp - mm) / (2.0 * step)).array().abs().mean();
}

}  // namespace bdn
