#pragma once

#include <Eigen/Core>

namespace rdd {

/// Shape-preserving piecewise-cubic Hermite interpolant (Fritsch-Carlson
/// slope limiting). For monotone data the interpolant is monotone.
/// Slopes may be supplied (e.g. when the nodal derivative is known
/// analytically); they are still limited against the secants.
class MonotoneCubicSpline {
 public:
  MonotoneCubicSpline() = default;
  MonotoneCubicSpline(Eigen::VectorXd x, Eigen::VectorXd y);
  MonotoneCubicSpline(Eigen::VectorXd x, Eigen::VectorXd y, Eigen::VectorXd slopes);

  /// Interpolated value; argument is clamped to [x_front, x_back].
  double value(double x) const;
  /// Derivative of the interpolant.
  double derivative(double x) const;

  double x_front() const { return x_(0); }
  double x_back() const { return x_(x_.size() - 1); }
  const Eigen::VectorXd& abscissae() const { return x_; }
  const Eigen::VectorXd& ordinates() const { return y_; }

 private:
  void limit_slopes();
  int find_interval(double x) const;

  Eigen::VectorXd x_, y_, d_;
};

} // namespace rdd
