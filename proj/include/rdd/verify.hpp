#pragma once

#include <Eigen/Core>
#include <vector>

#include "rdd/timestepper.hpp"

namespace rdd {

struct BoundsReport {
  Eigen::VectorXd step_min, step_max; // per time level, including t = 0
  double global_min = 0, global_max = 0;
  double worst_violation = 0; // max overshoot of [m, M], >= 0
  bool pass = false;
};

/// Empirical maximum-principle check of a trajectory against [m, M].
BoundsReport check_bounds(const Trajectory& traj, double m, double M, double tol);

struct RateSummary {
  std::vector<double> errors;  // e^i = ||U^i - ref||_{L^2}, i >= 0 (e^0 from the warm start)
  std::vector<double> ratios;  // e^i / e^{i-1}, degenerate tail excluded
  double max_ratio = 0;
  double geomean_ratio = 0;
};

/// Error-to-reference sequence of a recorded L-scheme history. Iterations
/// with e^i below 10x the inner linear tolerance are excluded from ratios.
RateSummary lscheme_rate(const IterationHistory& history, const Eigen::VectorXd& u_start,
                         const Eigen::VectorXd& reference, const Eigen::VectorXd& mass,
                         double lin_tol);

struct ConvergenceTable {
  std::vector<double> parameters; // tau or eps, strictly decreasing
  std::vector<double> distances;  // L^2(Omega x I)
  std::vector<double> orders;     // log2(d(2p)/d(p)), size parameters-1
};

/// L^2(Omega x I) distance of two piecewise-constant-in-time trajectories on
/// the same mesh; time partitions must be nested (N_b a multiple of N_a).
double trajectory_distance(const Trajectory& a, const Trajectory& b,
                           const Eigen::VectorXd& mass, double T);

/// Self-convergence in tau: runs the scenario at each tau (a halving
/// sequence) and at tau_ref = min(tau)/4, then tabulates distances to the
/// reference. Non-nested tau lists are rejected.
ConvergenceTable tau_convergence_study(const Scenario& scenario,
                                       const std::vector<double>& tau_list);

/// Distance of the epsilon-regularized trajectory to the degenerate one at
/// fixed tau, per epsilon (decreasing, > 0).
ConvergenceTable eps_convergence_study(const Scenario& scenario,
                                       const std::vector<double>& eps_list);

/// Manufactured-solution order anchor for the linear model on (0,1):
/// u(x,t) = sin(pi x) exp(-t), S = (pi^2 - 1) sin(pi x) exp(-t).
ConvergenceTable mms_linear_sanity(int n_cells, const std::vector<double>& tau_list, double T);

/// Per-step conservation residuals recorded during the run.
Eigen::VectorXd mass_balance(const Trajectory& traj);

} // namespace rdd
