#include "bdn/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bdn {

PiecewiseLinearActivation::PiecewiseLinearActivation(std::vector<double> slopes,
                                                     std::vector<double> intercepts,
                                                     std::vector<double> knots,
                                                     std::string name)
    : slopes_(std::move(slopes)),
      intercepts_(std::move(intercepts)),
      knots_(std::move(knots)),
      name_(std::move(name)) {
  if (slopes_.empty() || slopes_.size() != intercepts_.size() ||
      knots_.size() + 1 != slopes_.size())
    throw std::invalid_argument("activation: need J slopes, J intercepts, J-1 knots");
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
    if (!(knots_[i] < knots_[i + 1]))
      throw std::invalid_argument("activation: knots must be strictly increasing");
  for (double k : knots_)
    if (!std::isfinite(k)) throw std::invalid_argument("activation: knots must be finite");
}

PiecewiseLinearActivation PiecewiseLinearActivation::relu() {
  return {{0.0, 1.0}, {0.0, 0.0}, {0.0}, "relu"};
}

PiecewiseLinearActivation PiecewiseLinearActivation::leaky_relu(double slope) {
  if (!(slope > 0.0 && slope < 1.0))
    throw std::invalid_argument("leaky_relu: slope must lie in (0,1)");
  return {{slope, 1.0}, {0.0, 0.0}, {0.0}, "leaky_relu"};
}

PiecewiseLinearActivation PiecewiseLinearActivation::hard_tanh() {
  return {{0.0, 1.0, 0.0}, {-1.0, 0.0, 1.0}, {-1.0, 1.0}, "hard_tanh"};
}

PiecewiseLinearActivation PiecewiseLinearActivation::hard_sigmoid() {
  return {{0.0, 0.5, 0.0}, {0.0, 0.5, 1.0}, {-1.0, 1.0}, "hard_sigmoid"};
}

PiecewiseLinearActivation PiecewiseLinearActivation::builtin(const std::string& name,
                                                             double leaky_slope) {
  if (name == "relu") return relu();
  if (name == "leaky_relu") return leaky_relu(leaky_slope);
  if (name == "hard_tanh") return hard_tanh();
  if (name == "hard_sigmoid") return hard_sigmoid();
  throw std::invalid_argument("unknown activation: " + name);
}

int PiecewiseLinearActivation::segment_index(double t) const {
  // Number of knots <= t; a tie at knot[i] lands in segment i+1.
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  return static_cast<int>(it - knots_.begin());
}

double PiecewiseLinearActivation::operator()(double t) const {
  const int j = segment_index(t);
  return slopes_[j] * t + intercepts_[j];
}

Eigen::VectorXd PiecewiseLinearActivation::operator()(const Eigen::VectorXd& t) const {
  Eigen::VectorXd out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) out[i] = (*this)(t[i]);
  return out;
}

Eigen::MatrixXd PiecewiseLinearActivation::operator()(const Eigen::MatrixXd& t) const {
  Eigen::MatrixXd out(t.rows(), t.cols());
  for (Eigen::Index c = 0; c < t.cols(); ++c)
    for (Eigen::Index r = 0; r < t.rows(); ++r) out(r, c) = (*this)(t(r, c));
  return out;
}

double PiecewiseLinearActivation::lower(int j) const {
  return j == 0 ? -std::numeric_limits<double>::infinity() : knots_[j - 1];
}

double PiecewiseLinearActivation::upper(int j) const {
  return j == segment_count() - 1 ? std::numeric_limits<double>::infinity() : knots_[j];
}

double PiecewiseLinearActivation::lipschitz() const {
  double c = 0.0;
  for (double b : slopes_) c = std::max(c, std::fabs(b));
  return c;
}

}  // namespace bdn
