#include "rdd/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdd {

MonotoneCubicSpline::MonotoneCubicSpline(Eigen::VectorXd x, Eigen::VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  const Eigen::Index n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("spline: need >= 2 matching nodes");
  d_.resize(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double dl = (y_(i) - y_(i - 1)) / (x_(i) - x_(i - 1));
    const double dr = (y_(i + 1) - y_(i)) / (x_(i + 1) - x_(i));
    d_(i) = (dl * dr <= 0.0) ? 0.0 : 0.5 * (dl + dr);
  }
  d_(0) = (y_(1) - y_(0)) / (x_(1) - x_(0));
  d_(n - 1) = (y_(n - 1) - y_(n - 2)) / (x_(n - 1) - x_(n - 2));
  limit_slopes();
}

MonotoneCubicSpline::MonotoneCubicSpline(Eigen::VectorXd x, Eigen::VectorXd y,
                                         Eigen::VectorXd slopes)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {
  if (x_.size() < 2 || y_.size() != x_.size() || d_.size() != x_.size())
    throw std::invalid_argument("spline: need >= 2 matching nodes and slopes");
  limit_slopes();
}

void MonotoneCubicSpline::limit_slopes() {
  const Eigen::Index n = x_.size();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = x_(i + 1) - x_(i);
    if (!(h > 0.0)) throw std::invalid_argument("spline: abscissae must be strictly increasing");
    const double sec = (y_(i + 1) - y_(i)) / h;
    if (sec == 0.0) {
      d_(i) = 0.0;
      d_(i + 1) = 0.0;
      continue;
    }
    const double alpha = d_(i) / sec;
    const double beta = d_(i + 1) / sec;
    if (alpha < 0.0) d_(i) = 0.0;
    if (beta < 0.0) d_(i + 1) = 0.0;
    const double r = std::max(0.0, alpha) * std::max(0.0, alpha) +
                     std::max(0.0, beta) * std::max(0.0, beta);
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      d_(i) = t * std::max(0.0, alpha) * sec;
      d_(i + 1) = t * std::max(0.0, beta) * sec;
    }
  }
}

int MonotoneCubicSpline::find_interval(double x) const {
  const double* begin = x_.data();
  const double* end = begin + x_.size();
  const double* it = std::upper_bound(begin, end, x);
  Eigen::Index i = (it - begin) - 1;
  i = std::clamp<Eigen::Index>(i, 0, x_.size() - 2);
  return static_cast<int>(i);
}

double MonotoneCubicSpline::value(double x) const {
  x = std::clamp(x, x_front(), x_back());
  const int i = find_interval(x);
  const double h = x_(i + 1) - x_(i);
  const double s = (x - x_(i)) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y_(i) + h10 * h * d_(i) + h01 * y_(i + 1) + h11 * h * d_(i + 1);
}

double MonotoneCubicSpline::derivative(double x) const {
  x = std::clamp(x, x_front(), x_back());
  const int i = find_interval(x);
  const double h = x_(i + 1) - x_(i);
  const double s = (x - x_(i)) / h;
  const double s2 = s * s;
  const double g00 = (6 * s2 - 6 * s) / h;
  const double g10 = 3 * s2 - 4 * s + 1;
  const double g01 = (-6 * s2 + 6 * s) / h;
  const double g11 = 3 * s2 - 2 * s;
  return g00 * y_(i) + g10 * d_(i) + g01 * y_(i + 1) + g11 * d_(i + 1);
}

} // namespace rdd
