#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace bdn {

// Piecewise-linear activation h(t) = slope[j]*t + intercept[j] on the
// half-open segment [knot[j-1], knot[j]); knot[-1] = -inf and knot[J-1] = +inf
// are implicit. Ties at a knot resolve to the right segment. Immutable after
// construction, so unrestricted concurrent reads are safe.
class PiecewiseLinearActivation {
 public:
  PiecewiseLinearActivation(std::vector<double> slopes,
                            std::vector<double> intercepts,
                            std::vector<double> knots,
                            std::string name = "");

  static PiecewiseLinearActivation relu();
  static PiecewiseLinearActivation leaky_relu(double slope);
  static PiecewiseLinearActivation hard_tanh();
  // Fixed as clamp((t+1)/2, 0, 1) with knots (-1, 1).
  static PiecewiseLinearActivation hard_sigmoid();
  // name: relu | leaky_relu | hard_tanh | hard_sigmoid. Throws on unknown.
  static PiecewiseLinearActivation builtin(const std::string& name,
                                           double leaky_slope = 0.01);

  double operator()(double t) const;
  Eigen::VectorXd operator()(const Eigen::VectorXd& t) const;
  Eigen::MatrixXd operator()(const Eigen::MatrixXd& t) const;

  // 0-based index of the segment containing t (right-closed ties).
  int segment_index(double t) const;
  double derivative(double t) const { return slopes_[segment_index(t)]; }

  int segment_count() const { return static_cast<int>(slopes_.size()); }
  double slope(int j) const { return slopes_[j]; }
  double intercept(int j) const { return intercepts_[j]; }
  // Segment bounds; lower(0) = -inf, upper(J-1) = +inf.
  double lower(int j) const;
  double upper(int j) const;
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& slopes() const { return slopes_; }
  const std::vector<double>& intercepts() const { return intercepts_; }

  // Lipschitz constant max_j |slope[j]|.
  double lipschitz() const;

  const std::string& name() const { return name_; }

 private:
  std::vector<double> slopes_, intercepts_, knots_;
  std::string name_;
};

}  // namespace bdn
