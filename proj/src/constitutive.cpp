#include "rdd/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace rdd {

namespace {

// Right-hand side of the saturation ODE theta' = (1 - theta^c)^b.
double theta_slope(double theta, double b, double c) {
  theta = std::clamp(theta, 0.0, 1.0);
  return std::pow(std::max(0.0, 1.0 - std::pow(theta, c)), b);
}

double rk4_step(double theta, double h, double b, double c) {
  const double k1 = theta_slope(theta, b, c);
  const double k2 = theta_slope(theta + 0.5 * h * k1, b, c);
  const double k3 = theta_slope(theta + 0.5 * h * k2, b, c);
  const double k4 = theta_slope(theta + h * k3, b, c);
  return theta + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Remaining eta-distance to theta = 1, from the extinction asymptotics
// 1 - theta ~ ((1-b) c^b (u* - eta))^{1/(1-b)}.
double eta_to_saturation(double theta, double b, double c) {
  const double y = std::max(0.0, 1.0 - theta);
  return std::pow(c, -b) * std::pow(y, 1.0 - b) / (1.0 - b);
}

// Tail integral int_{1-y}^1 (1 - s^c)^{-b} ds to O(y^{3-b}).
double saturation_tail(double y, double b, double c) {
  const double lead = std::pow(y, 1.0 - b) / (1.0 - b);
  const double corr = 0.5 * b * (c - 1.0) * std::pow(y, 2.0 - b) / (2.0 - b);
  return std::pow(c, -b) * (lead + corr);
}

const double kGauss5Nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                0.5384693101056831, 0.9061798459386640};
const double kGauss5Weights[5] = {0.2369268850561891, 0.4786286704993665,
                                  0.5688888888888889, 0.4786286704993665,
                                  0.2369268850561891};

template <class F>
double gauss5(F&& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int q = 0; q < 5; ++q) acc += kGauss5Weights[q] * f(mid + half * kGauss5Nodes[q]);
  return acc * half;
}

// log-form evaluation of K_r(theta) theta^{-a}; theta in (0, 1].
double kr_over_theta_a(double theta, double m, double a) {
  const double x = std::min(1.0, std::pow(theta, 1.0 / m));
  // 1 - (1 - x)^m without cancellation for small x
  const double bracket = (x >= 1.0) ? 1.0 : -std::expm1(m * std::log1p(-x));
  if (bracket <= 0.0) return 0.0;
  return std::exp((0.5 - a) * std::log(theta) + 2.0 * std::log(bracket));
}

} // namespace

ConstitutiveTable build_table(const SoilParams& params, int n_samples) {
  params.validate();
  if (n_samples < 64) throw std::invalid_argument("build_table: n_samples must be >= 64");

  const double b = params.b, c = params.c;
  const double theta_stop = 1.0 - 1e-12;
  const double h_max = 1.0 / static_cast<double>(n_samples);
  const double tol = 1e-13;

  std::vector<double> etas{0.0}, thetas{0.0};
  double eta = 0.0, theta = 0.0, h = h_max;
  constexpr long budget = 500000;
  long steps = 0;
  while (theta < theta_stop) {
    if (++steps > budget)
      throw std::runtime_error("build_table: theta failed to reach 1 - 1e-12 within budget");
    h = std::min({h, h_max, 0.25 * eta_to_saturation(theta, b, c) + 1e-30});
    const double full = rk4_step(theta, h, b, c);
    const double half = rk4_step(rk4_step(theta, 0.5 * h, b, c), 0.5 * h, b, c);
    const double err = std::abs(half - full);
    if (err <= tol && half <= 1.0) {
      theta = half + (half - full) / 15.0; // local extrapolation
      eta += h;
      etas.push_back(eta);
      thetas.push_back(std::min(theta, 1.0));
    }
    const double grow = 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2);
    h *= std::clamp(grow, 0.2, 5.0);
  }

  ConstitutiveTable table;
  table.soil = params;
  table.u_star = eta + saturation_tail(1.0 - theta, b, c);
  etas.push_back(table.u_star);
  thetas.push_back(1.0);

  const auto n = static_cast<Eigen::Index>(etas.size());
  table.eta_grid = Eigen::Map<Eigen::VectorXd>(etas.data(), n);
  table.theta_grid = Eigen::Map<Eigen::VectorXd>(thetas.data(), n);
  Eigen::VectorXd slopes(n);
  for (Eigen::Index i = 0; i < n; ++i) slopes(i) = theta_slope(table.theta_grid(i), b, c);
  table.theta_spline = MonotoneCubicSpline(table.eta_grid, table.theta_grid, slopes);

  table.L_theta = 1.0;
  table.alpha = 1.0 / (2.0 * table.u_star);
  table.delta_holder = 1.0 - b;
  table.C_holder = 2.0 / (1.0 - b);
  if (table.u_star < 1.0 - 1e-10)
    throw std::runtime_error("build_table: u* < 1, integration inconsistent");

  // Cumulative Kirchhoff potential on the same grid; slope of Phi is K.
  Eigen::VectorXd phi(n), kvals(n);
  auto k_of_eta = [&](double e) {
    const double t = std::clamp(table.theta_spline.value(e), 0.0, 1.0);
    if (t < 1e-12) return 0.0;
    return params.saturated_conductivity() * kr_over_theta_a(t, params.m, params.a);
  };
  phi(0) = 0.0;
  kvals(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    phi(i) = phi(i - 1) + gauss5(k_of_eta, table.eta_grid(i - 1), table.eta_grid(i));
    kvals(i) = k_of_eta(table.eta_grid(i));
  }
  table.phi_spline = MonotoneCubicSpline(table.eta_grid, phi, kvals);
  return table;
}

double theta_extended(double eta, const ConstitutiveTable& table) {
  if (eta < 0.0) return eta;
  if (eta <= table.u_star) return table.theta_spline.value(eta);
  return 2.0 - theta_extended(2.0 * table.u_star - eta, table);
}

double theta_prime(double eta, const ConstitutiveTable& table) {
  const double us = table.u_star;
  if (eta <= 0.0 || eta >= 2.0 * us) return 1.0;
  if (eta > us) eta = 2.0 * us - eta;
  const double t = std::clamp(table.theta_spline.value(eta), 0.0, 1.0);
  return theta_slope(t, table.soil.b, table.soil.c);
}

double u_of_theta(double theta, const ConstitutiveTable& table) {
  if (theta < 0.0) return theta;
  if (theta > 2.0) return theta - 2.0 + 2.0 * table.u_star;
  if (theta > 1.0) return 2.0 * table.u_star - u_of_theta(2.0 - theta, table);
  double lo = 0.0, hi = table.u_star;
  for (int i = 0; i < 100 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    (table.theta_spline.value(mid) < theta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double vg_relative_permeability(double theta, double m) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::domain_error("vg_relative_permeability: theta outside [0,1]");
  if (theta == 0.0) return 0.0;
  const double x = std::min(1.0, std::pow(theta, 1.0 / m));
  const double bracket = (x >= 1.0) ? 1.0 : -std::expm1(m * std::log1p(-x));
  return std::sqrt(theta) * bracket * bracket;
}

double vg_pressure_head(double theta, const SoilParams& params) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::domain_error("vg_pressure_head: theta outside [0,1]");
  if (theta == 0.0) return -std::numeric_limits<double>::infinity();
  if (theta == 1.0) return 0.0;
  const double q = std::pow(theta, -1.0 / params.m) - 1.0;
  return -params.h_cap * std::pow(q, 1.0 / params.n());
}

double conductivity_K(double eta, const ConstitutiveTable& table) {
  eta = std::abs(eta); // even extension
  if (eta >= table.u_star) return table.soil.saturated_conductivity();
  const double t = std::clamp(table.theta_spline.value(eta), 0.0, 1.0);
  if (t < 1e-12) return 0.0;
  return table.soil.saturated_conductivity() * kr_over_theta_a(t, table.soil.m, table.soil.a);
}

double kbar1_z(double eta, const ConstitutiveTable& table) {
  eta = std::abs(eta);
  if (eta >= table.u_star) return 1.0 / table.soil.C_scale;
  const double t = std::clamp(table.theta_spline.value(eta), 0.0, 1.0);
  return std::pow(t, table.soil.a) / table.soil.C_scale;
}

double kbar_z(double eta, const ConstitutiveTable& table) {
  return conductivity_K(eta, table) * kbar1_z(eta, table);
}

double phi_kirchhoff(double u, const ConstitutiveTable& table) {
  if (u < 0.0) return -phi_kirchhoff(-u, table);
  if (u <= table.u_star) return table.phi_spline.value(u);
  return table.phi_spline.value(table.u_star) +
         table.soil.saturated_conductivity() * (u - table.u_star);
}

namespace {

CertificationReport run_certification(const ConstitutiveTable& table, int n_probe,
                                      const Eigen::VectorXd* eta_override,
                                      const Eigen::VectorXd* theta_override) {
  CertificationReport rep;
  const double us = table.u_star;
  const double fd_h = 1e-6;

  auto theta_at = [&](double e) { return theta_extended(e, table); };

  // (i) analytic derivative vs centered finite differences, away from junctions
  double max_fd = 0.0;
  for (int i = 0; i < n_probe; ++i) {
    const double e = -us + 4.0 * us * (i + 0.5) / n_probe;
    if (std::abs(e) < 1e-3 || std::abs(e - us) < 1e-3 || std::abs(e - 2 * us) < 1e-3) continue;
    const double fd = (theta_at(e + fd_h) - theta_at(e - fd_h)) / (2 * fd_h);
    max_fd = std::max(max_fd, std::abs(theta_prime(e, table) - fd));
  }
  rep.max_theta_prime_fd_error = max_fd;
  rep.theta_prime_ok = max_fd <= 1e-6;

  // (ii) growth condition theta(eta) eta >= alpha eta^2 on [-3u*, 3u*]
  double min_growth = std::numeric_limits<double>::infinity();
  if (eta_override) {
    for (Eigen::Index i = 0; i < eta_override->size(); ++i) {
      const double e = (*eta_override)(i), th = (*theta_override)(i);
      min_growth = std::min(min_growth, th * e - table.alpha * e * e);
    }
  } else {
    for (int i = 0; i < n_probe; ++i) {
      const double e = -3.0 * us + 6.0 * us * (i + 0.5) / n_probe;
      min_growth = std::min(min_growth, theta_at(e) * e - table.alpha * e * e);
    }
  }
  rep.min_growth_slack = min_growth;
  rep.growth_ok = min_growth >= -1e-12;

  // (iii) Holder bound for the inverse on [0, 2]
  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> unit(0.0, 2.0);
  double max_holder = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_probe; ++i) {
    const double t1 = unit(rng), t2 = unit(rng);
    const double lhs = std::abs(u_of_theta(t1, table) - u_of_theta(t2, table));
    const double rhs = table.C_holder * std::pow(std::abs(t1 - t2), table.delta_holder);
    max_holder = std::max(max_holder, lhs - rhs);
  }
  rep.max_holder_violation = max_holder;
  rep.holder_ok = max_holder <= 1e-10;

  // (iv) C1 junction residuals at eta in {0, u*}
  auto junction = [&](double e) {
    const double left = (theta_at(e) - theta_at(e - fd_h)) / fd_h;
    const double right = (theta_at(e + fd_h) - theta_at(e)) / fd_h;
    return std::abs(left - right);
  };
  rep.junction_residual_origin = junction(0.0);
  rep.junction_residual_ustar = junction(us);
  rep.junctions_ok =
      rep.junction_residual_origin <= 1e-4 && rep.junction_residual_ustar <= 1e-4;

  // H3(b), certified as: K vanishes exactly where theta does
  bool degen_ok = true;
  for (int i = 0; i <= 200; ++i) {
    const double e = -us + 4.0 * us * i / 200.0;
    const bool k_zero = conductivity_K(e, table) == 0.0;
    const bool th_zero = std::abs(theta_at(std::abs(e))) <= 1e-10;
    if (k_zero != th_zero) degen_ok = false;
  }
  rep.degeneracy_set_ok = degen_ok;

  rep.passed = rep.theta_prime_ok && rep.growth_ok && rep.holder_ok && rep.junctions_ok &&
               rep.degeneracy_set_ok;
  return rep;
}

} // namespace

CertificationReport certify_hypotheses(const ConstitutiveTable& table, int n_probe) {
  return run_certification(table, n_probe, nullptr, nullptr);
}

CertificationReport certify_samples(const ConstitutiveTable& table, const Eigen::VectorXd& eta,
                                    const Eigen::VectorXd& theta) {
  return run_certification(table, static_cast<int>(eta.size()), &eta, &theta);
}

} // namespace rdd
