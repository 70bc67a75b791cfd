#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "rdd/constitutive.hpp"
#include "rdd/lscheme.hpp"
#include "rdd/mesh.hpp"

namespace rdd {

/// Pointwise constitutive closure used by the stepper: either the tabulated
/// van Genuchten-Mualem family or the plain linear model (theta = id, K = 1,
/// no gravity) used for manufactured-solution checks.
struct ConstitutiveModel {
  std::function<double(double)> theta;
  std::function<double(double)> conductivity;
  std::function<double(double)> kbar_z; // z-component of K * Kbar_1
  double L_theta = 1.0;
  double u_star = 1.0;
};

/// Wraps a table; keeps the table alive via shared ownership.
ConstitutiveModel make_table_model(std::shared_ptr<const ConstitutiveTable> table);
ConstitutiveModel make_linear_model();

struct StepDiagnostics {
  double min_u = 0, max_u = 0;
  double theta_mass = 0;         // sum_i m_i theta(U_n)_i
  double balance_residual = 0;   // |sum_i m_i d theta_i - tau (S_tot + boundary flux)|
  double boundary_flux = 0;
  int lscheme_iters = 0;
  bool converged = true;
};

struct Scenario {
  Mesh mesh;
  ConstitutiveModel model;
  double T = 1.0;
  int N = 1;
  std::function<double(double x, double z)> initial;            // u0(x, z)
  std::function<double(double x, double z, double t)> dirichlet; // u_d on tagged nodes
  std::function<double(double x, double z, double t, double u)> source; // S, frozen at u_{n-1}
  double epsilon = 0.0; // weight regularization K + epsilon
  LschemeConfig solver;
  bool abort_on_nonconvergence = false;

  double tau() const { return T / N; }
};

struct Trajectory {
  Eigen::VectorXd times; // t_0 .. t_N
  std::vector<Eigen::VectorXd> states; // u at each time level (N+1 entries)
  std::vector<IterationHistory> histories; // per step (N entries)
  std::vector<StepDiagnostics> diagnostics; // per step
  bool all_converged = true;
};

/// Assembles the frozen-coefficient operators for one step: per-element
/// weight K(mean of nodal u_{n-1}) + epsilon, convection K*Kbar_1 at the same
/// element mean, lumped source at u_{n-1}, Dirichlet data sampled at t_n.
FrozenStep freeze_step(const Eigen::VectorXd& u_prev, double t_prev, double t_next,
                       const Scenario& scenario);

/// One semi-implicit step; returns the converged state and its history.
std::pair<Eigen::VectorXd, IterationHistory> step(const Eigen::VectorXd& u_prev, double t_prev,
                                                  double t_next, const Scenario& scenario);

/// Runs the full trajectory of N sequential steps with diagnostics.
Trajectory run(const Scenario& scenario);

/// Identical loop with weight K + eps (eps = 0 reproduces run exactly).
Trajectory run_regularized(Scenario scenario, double eps);

} // namespace rdd
