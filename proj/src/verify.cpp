#include "rdd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdd/assembly.hpp"

namespace rdd {

BoundsReport check_bounds(const Trajectory& traj, double m, double M, double tol) {
  if (traj.states.empty()) throw std::invalid_argument("check_bounds: empty trajectory");
  BoundsReport rep;
  const auto n_levels = static_cast<Eigen::Index>(traj.states.size());
  rep.step_min.resize(n_levels);
  rep.step_max.resize(n_levels);
  for (Eigen::Index n = 0; n < n_levels; ++n) {
    rep.step_min(n) = traj.states[static_cast<std::size_t>(n)].minCoeff();
    rep.step_max(n) = traj.states[static_cast<std::size_t>(n)].maxCoeff();
  }
  rep.global_min = rep.step_min.minCoeff();
  rep.global_max = rep.step_max.maxCoeff();
  rep.worst_violation = std::max({0.0, m - rep.global_min, rep.global_max - M});
  rep.pass = rep.worst_violation <= tol;
  return rep;
}

RateSummary lscheme_rate(const IterationHistory& history, const Eigen::VectorXd& u_start,
                         const Eigen::VectorXd& reference, const Eigen::VectorXd& mass,
                         double lin_tol) {
  if (history.iterates.size() != history.iters.size())
    throw std::invalid_argument("lscheme_rate: history was recorded without iterates");
  RateSummary rs;
  rs.errors.push_back(mass_norm(mass, u_start - reference));
  for (const auto& u : history.iterates) rs.errors.push_back(mass_norm(mass, u - reference));

  // Below ~10x the inner solver tolerance the errors are dominated by CG
  // noise, so ratios there say nothing about the contraction factor.
  const double floor = 10.0 * lin_tol;
  double log_sum = 0;
  int n_ratios = 0;
  for (std::size_t i = 1; i < rs.errors.size(); ++i) {
    if (rs.errors[i] < floor || rs.errors[i - 1] < floor) break;
    const double r = rs.errors[i] / rs.errors[i - 1];
    rs.ratios.push_back(r);
    rs.max_ratio = std::max(rs.max_ratio, r);
    log_sum += std::log(r);
    ++n_ratios;
  }
  rs.geomean_ratio = n_ratios > 0 ? std::exp(log_sum / n_ratios) : 0.0;
  return rs;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b,
                           const Eigen::VectorXd& mass, double T) {
  const auto na = a.states.size() - 1, nb = b.states.size() - 1;
  if (na == 0 || nb == 0) throw std::invalid_argument("trajectory_distance: empty trajectory");
  const Trajectory& coarse = na <= nb ? a : b;
  const Trajectory& fine = na <= nb ? b : a;
  const auto nc = std::min(na, nb), nf = std::max(na, nb);
  if (nf % nc != 0)
    throw std::invalid_argument("trajectory_distance: time partitions are not nested");
  const auto ratio = nf / nc;
  const double tau_f = T / static_cast<double>(nf);
  // Both trajectories are piecewise constant in time, taking the value of the
  // new level on each step interval (t_{n-1}, t_n].
  double acc = 0;
  for (std::size_t k = 1; k <= nf; ++k) {
    const std::size_t n = (k + ratio - 1) / ratio;
    const Eigen::VectorXd diff = fine.states[k] - coarse.states[n];
    acc += tau_f * diff.cwiseAbs2().dot(mass);
  }
  return std::sqrt(acc);
}

namespace {

int steps_for(double T, double tau) {
  const double ratio = T / tau;
  const int n = static_cast<int>(std::lround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9 * ratio)
    throw std::invalid_argument("convergence study: tau does not divide the horizon T");
  return n;
}

Trajectory run_lean(Scenario sc) {
  sc.solver.store_iterates = false;
  sc.abort_on_nonconvergence = true;
  return run(sc);
}

} // namespace

ConvergenceTable tau_convergence_study(const Scenario& scenario,
                                       const std::vector<double>& tau_list) {
  if (tau_list.size() < 2)
    throw std::invalid_argument("tau_convergence_study: need at least two tau values");
  for (std::size_t i = 1; i < tau_list.size(); ++i) {
    const double r = tau_list[i - 1] / tau_list[i];
    if (std::abs(r - 2.0) > 1e-9)
      throw std::invalid_argument("tau_convergence_study: tau list must halve");
  }
  std::vector<int> steps;
  for (double tau : tau_list) steps.push_back(steps_for(scenario.T, tau));

  Scenario sc = scenario;
  sc.N = 4 * steps.back(); // reference resolution tau_min / 4
  const Trajectory ref = run_lean(sc);
  const Eigen::VectorXd mass = lumped_mass(scenario.mesh);

  ConvergenceTable table;
  table.parameters = tau_list;
  for (int n : steps) {
    sc.N = n;
    table.distances.push_back(trajectory_distance(run_lean(sc), ref, mass, scenario.T));
  }
  for (std::size_t i = 1; i < table.distances.size(); ++i)
    table.orders.push_back(std::log2(table.distances[i - 1] / table.distances[i]));
  return table;
}

ConvergenceTable eps_convergence_study(const Scenario& scenario,
                                       const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw std::invalid_argument("eps_convergence_study: empty eps list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (eps_list[i] <= 0 || (i > 0 && eps_list[i] >= eps_list[i - 1]))
      throw std::invalid_argument("eps_convergence_study: eps list must be positive decreasing");
  }
  Scenario sc = scenario;
  sc.solver.store_iterates = false;
  sc.abort_on_nonconvergence = true;
  const Trajectory degenerate = run_regularized(sc, 0.0);
  const Eigen::VectorXd mass = lumped_mass(scenario.mesh);

  ConvergenceTable table;
  table.parameters = eps_list;
  for (double eps : eps_list) {
    const Trajectory regular = run_regularized(sc, eps);
    table.distances.push_back(trajectory_distance(regular, degenerate, mass, scenario.T));
  }
  for (std::size_t i = 1; i < table.distances.size(); ++i)
    table.orders.push_back(std::log2(table.distances[i - 1] / table.distances[i]) /
                           std::log2(table.parameters[i - 1] / table.parameters[i]));
  return table;
}

ConvergenceTable mms_linear_sanity(int n_cells, const std::vector<double>& tau_list, double T) {
  const double pi = 3.14159265358979323846;
  Scenario sc;
  sc.mesh = uniform_interval_mesh(n_cells, 0.0, 1.0);
  sc.model = make_linear_model();
  sc.T = T;
  sc.initial = [pi](double, double z) { return std::sin(pi * z); };
  sc.dirichlet = [](double, double, double) { return 0.0; };
  sc.source = [pi](double, double z, double t, double) {
    return (pi * pi - 1.0) * std::sin(pi * z) * std::exp(-t);
  };
  sc.solver.atol = 1e-11;
  sc.solver.rtol = 0.0;
  sc.solver.lin_tol = 1e-14;
  sc.solver.store_iterates = false;
  sc.abort_on_nonconvergence = true;

  const Eigen::VectorXd mass = lumped_mass(sc.mesh);
  Eigen::VectorXd exact(sc.mesh.n_nodes());
  for (Eigen::Index i = 0; i < sc.mesh.n_nodes(); ++i)
    exact(i) = std::sin(pi * sc.mesh.z_coord(i)) * std::exp(-T);

  ConvergenceTable table;
  table.parameters = tau_list;
  for (double tau : tau_list) {
    sc.N = steps_for(T, tau);
    const Trajectory traj = run(sc);
    table.distances.push_back(mass_norm(mass, traj.states.back() - exact));
  }
  for (std::size_t i = 1; i < table.distances.size(); ++i)
    table.orders.push_back(std::log2(table.distances[i - 1] / table.distances[i]) /
                           std::log2(table.parameters[i - 1] / table.parameters[i]));
  return table;
}

Eigen::VectorXd mass_balance(const Trajectory& traj) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(traj.diagnostics.size()));
  for (Eigen::Index n = 0; n < r.size(); ++n)
    r(n) = traj.diagnostics[static_cast<std::size_t>(n)].balance_residual;
  return r;
}

} // namespace rdd
