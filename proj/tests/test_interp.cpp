#include <doctest.h>

#include <Eigen/Core>
#include <cmath>

#include "rdd/interp.hpp"

using rdd::MonotoneCubicSpline;

TEST_CASE("spline reproduces nodal data exactly") {
  Eigen::VectorXd x(5), y(5);
  x << 0.0, 0.3, 0.7, 1.4, 2.0;
  y << 1.0, 1.2, 2.5, 2.6, 4.0;
  MonotoneCubicSpline s(x, y);
  for (int i = 0; i < 5; ++i) CHECK(s.value(x(i)) == doctest::Approx(y(i)).epsilon(1e-15));
}

TEST_CASE("monotone data gives a monotone interpolant") {
  Eigen::VectorXd x(6), y(6);
  x << 0, 1, 2, 3, 4, 5;
  y << 0.0, 0.1, 0.15, 2.0, 2.05, 3.0; // widely varying secants
  MonotoneCubicSpline s(x, y);
  double prev = s.value(0.0);
  for (int k = 1; k <= 2000; ++k) {
    const double v = s.value(5.0 * k / 2000.0);
    CHECK(v >= prev - 1e-14);
    prev = v;
  }
  // derivative of a nondecreasing interpolant stays nonnegative
  for (int k = 0; k <= 500; ++k) CHECK(s.derivative(5.0 * k / 500.0) >= -1e-12);
}

TEST_CASE("interpolates smooth monotone functions to high order") {
  // Monotone target so the shape limiter never kicks in; plain Hermite
  // accuracy O(h^4) applies.
  auto f = [](double t) { return t + 0.5 * std::sin(t); };
  auto fp = [](double t) { return 1.0 + 0.5 * std::cos(t); };
  const int n = 200;
  Eigen::VectorXd x(n), y(n), d(n);
  for (int i = 0; i < n; ++i) {
    x(i) = 2.0 * i / (n - 1);
    y(i) = f(x(i));
    d(i) = fp(x(i));
  }
  MonotoneCubicSpline s(x, y, d);
  double max_err = 0;
  for (int k = 0; k <= 1000; ++k) {
    const double t = 2.0 * k / 1000.0;
    max_err = std::max(max_err, std::abs(s.value(t) - f(t)));
  }
  CHECK(max_err < 1e-8); // h^4 with h = 1e-2
}

TEST_CASE("derivative is consistent with finite differences of value") {
  Eigen::VectorXd x(4), y(4);
  x << 0, 1, 2, 3;
  y << 0, 0.8, 1.0, 2.4;
  MonotoneCubicSpline s(x, y);
  for (double t : {0.2, 0.9, 1.5, 2.7}) {
    const double h = 1e-6;
    const double fd = (s.value(t + h) - s.value(t - h)) / (2 * h);
    CHECK(s.derivative(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("arguments are clamped to the data range") {
  Eigen::VectorXd x(3), y(3);
  x << 0, 1, 2;
  y << 5, 6, 9;
  MonotoneCubicSpline s(x, y);
  CHECK(s.value(-10.0) == doctest::Approx(5.0));
  CHECK(s.value(10.0) == doctest::Approx(9.0));
}

TEST_CASE("supplied slopes are limited against the secants") {
  // A wildly overshooting supplied slope must not break monotonicity.
  Eigen::VectorXd x(3), y(3), d(3);
  x << 0, 1, 2;
  y << 0, 0.01, 0.02;
  d << 50.0, 50.0, 50.0;
  MonotoneCubicSpline s(x, y, d);
  double prev = s.value(0.0);
  for (int k = 1; k <= 400; ++k) {
    const double v = s.value(2.0 * k / 400.0);
    CHECK(v >= prev - 1e-14);
    prev = v;
  }
}
