#pragma once

#include <Eigen/Core>

#include "rdd/interp.hpp"
#include "rdd/soil.hpp"

namespace rdd {

/// Tabulation of the transformed saturation theta(eta) on [0, u*], built by
/// integrating theta' = (1 - theta^c)^b from theta(0) = 0. Immutable after
/// construction; all evaluators below are pure functions of (params, table)
/// and safe to share across threads.
struct ConstitutiveTable {
  SoilParams soil;
  double u_star = 1.0;        // eta at which theta reaches 1
  Eigen::VectorXd eta_grid;   // strictly increasing on [0, u_star]
  Eigen::VectorXd theta_grid; // theta at samples, theta_grid[0]=0, last=1
  double L_theta = 1.0;       // sup theta' (= 1 for this family)
  double alpha = 0.5;         // growth constant 1/(2 u*)
  double delta_holder = 1.0;  // 1 - b
  double C_holder = 2.0;      // 2/(1-b)

  MonotoneCubicSpline theta_spline; // theta(eta) on [0, u_star]
  MonotoneCubicSpline phi_spline;   // Phi(eta) = int_0^eta K on [0, u_star]
};

/// Integrates the saturation ODE and attaches the monotone interpolant.
/// n_samples bounds the coarsest spacing of the stored grid (>= 64).
/// Throws std::invalid_argument on bad params, std::runtime_error if theta
/// fails to reach 1 - 1e-12 within the integration budget.
ConstitutiveTable build_table(const SoilParams& params, int n_samples = 1024);

/// Globally extended saturation: eta for eta < 0, U^{-1} on [0, u*],
/// 2 - theta(2u* - eta) above (central symmetry about (u*, 1)).
double theta_extended(double eta, const ConstitutiveTable& table);

/// Derivative of the extension: 1 for eta <= 0, (1 - theta^c)^b on [0, u*],
/// mirrored on (u*, 2u*), 1 beyond. Values lie in [0, 1].
double theta_prime(double eta, const ConstitutiveTable& table);

/// Inverse transform U(theta) of the extended saturation (Holder-continuous).
double u_of_theta(double theta, const ConstitutiveTable& table);

/// van Genuchten-Mualem relative permeability K_r(theta) on [0,1].
/// Throws std::domain_error for theta outside [0,1].
double vg_relative_permeability(double theta, double m);

/// Diagnostic pressure head psi(theta) <= 0; returns -inf at theta = 0.
double vg_pressure_head(double theta, const SoilParams& params);

/// Extended conductivity: (C/phi) K_s K_r(theta) theta^{-a} on [0, u*]
/// (evaluated in log form, exactly 0 below theta = 1e-12), constant
/// saturated value above u*, even below 0.
double conductivity_K(double eta, const ConstitutiveTable& table);

/// z-component of the convection scaling K_bar_1: theta^a / C on [0, u*],
/// 1/C above, even below 0.
double kbar1_z(double eta, const ConstitutiveTable& table);

/// z-component of the full convection coefficient K_bar = K * K_bar_1;
/// single evaluation path so the factorization is exact by construction.
double kbar_z(double eta, const ConstitutiveTable& table);

/// Kirchhoff potential Phi(u) = int_0^u K; odd-extended since K is even.
double phi_kirchhoff(double u, const ConstitutiveTable& table);

/// Sampling-based certification of the structural hypotheses.
struct CertificationReport {
  double max_theta_prime_fd_error = 0;  // |theta'_analytic - theta'_FD|, sup over probes
  double min_growth_slack = 0;          // min of theta(eta) eta - alpha eta^2
  double max_holder_violation = 0;      // max of |U(t1)-U(t2)| - C_H |t1-t2|^{1-b}
  double junction_residual_origin = 0;  // C1 slope mismatch at eta = 0
  double junction_residual_ustar = 0;   // C1 slope mismatch at eta = u*
  bool theta_prime_ok = false;
  bool growth_ok = false;
  bool holder_ok = false;
  bool junctions_ok = false;
  bool passed = false;
  // H3(b): for this family K(eta) = 0 iff theta(eta) = 0; certified as a
  // pointwise identity on the probe grid rather than a measure condition.
  bool degeneracy_set_ok = false;
};

CertificationReport certify_hypotheses(const ConstitutiveTable& table, int n_probe = 10000);

/// Same checks on explicitly supplied (eta, theta) samples; used for
/// negative-control fixtures with corrupted tables.
CertificationReport certify_samples(const ConstitutiveTable& table,
                                    const Eigen::VectorXd& eta,
                                    const Eigen::VectorXd& theta);

} // namespace rdd
