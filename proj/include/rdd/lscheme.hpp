#pragma once

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rdd/assembly.hpp"

namespace rdd {

struct LschemeConfig {
  double L = 1.0;           // stabilization parameter, > 0
  double atol = 1e-10;      // increment stopping tolerances
  double rtol = 1e-8;
  int max_iters = 200;
  double lin_tol = 1e-12;   // inner CG relative residual
  int lin_max_iters = 0;    // 0 = automatic (max(200, 20 n))
  bool store_iterates = true;

  /// Warns (returns message) for L below L_theta; throws for L <= L_theta/2.
  std::string check(double L_theta) const;
};

struct IterationRecord {
  double increment_norm = 0;    // ||u^i - u^{i-1}||_{L^2} (lumped)
  double weighted_seminorm = 0; // |u^i|_omega
  int cg_iters = 0;
};

struct IterationHistory {
  std::vector<IterationRecord> iters;
  std::vector<Eigen::VectorXd> iterates; // u^1, u^2, ... when stored
  bool converged = false;
};

struct CgFailure : std::runtime_error {
  double residual;
  explicit CgFailure(double r);
};

struct CgResult {
  Eigen::VectorXd x;
  int iters = 0;
  double residual = 0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for the SPD shifted system.
CgResult cg_solve(const SpMat& a, const Eigen::VectorXd& b, double tol, int max_iters,
                  const Eigen::VectorXd* x0 = nullptr);

/// Everything frozen at the previous time level u_{n-1} for one step:
/// lumped mass, weighted stiffness with K(u_{n-1}) (+ epsilon), convection and
/// source loads, theta(u_{n-1}), Dirichlet data at t_n.
struct FrozenStep {
  Eigen::VectorXd mass;
  SpMat stiffness;            // unconstrained, weight already includes epsilon
  Eigen::VectorXd convection; // F_conv
  Eigen::VectorXd source;     // F_src (already mass-lumped)
  Eigen::VectorXd theta_prev; // theta(U_{n-1}) nodal
  double tau = 1.0;
  DirichletBC bc;
  std::function<double(double)> theta; // pointwise saturation
};

/// Lumped L^2 norm sqrt(v^T M v).
double mass_norm(const Eigen::VectorXd& mass, const Eigen::VectorXd& v);
/// Weighted seminorm sqrt(v^T A_omega v).
double weighted_seminorm(const SpMat& stiffness, const Eigen::VectorXd& v);

/// One L-scheme iteration: solves
///   (L M + tau A_omega) U = L M U^{i-1} - M theta(U^{i-1}) + M theta(U_{n-1})
///                           + tau F_src - tau F_conv
/// under the Dirichlet constraints. Throws CgFailure on inner non-convergence.
Eigen::VectorXd lscheme_step(const Eigen::VectorXd& u_prev_iter, const FrozenStep& frozen,
                             const DirichletSystem& sys, const LschemeConfig& cfg,
                             int* cg_iters = nullptr);

struct LschemeResult {
  Eigen::VectorXd u;
  IterationHistory history;
};

/// Fixed-point loop starting from u_time_prev, stopping on the increment
/// ||u^i - u^{i-1}|| <= atol + rtol ||u^i||. Non-convergence within
/// max_iters returns the last iterate with history.converged = false.
LschemeResult lscheme_solve(const Eigen::VectorXd& u_time_prev, const FrozenStep& frozen,
                            const LschemeConfig& cfg);

} // namespace rdd
