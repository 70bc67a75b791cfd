#include "rdd/timestepper.hpp"

#include <cmath>
#include <stdexcept>

namespace rdd {

ConstitutiveModel make_table_model(std::shared_ptr<const ConstitutiveTable> table) {
  ConstitutiveModel m;
  m.theta = [table](double u) { return theta_extended(u, *table); };
  m.conductivity = [table](double u) { return conductivity_K(u, *table); };
  m.kbar_z = [table](double u) { return rdd::kbar_z(u, *table); };
  m.L_theta = table->L_theta;
  m.u_star = table->u_star;
  return m;
}

ConstitutiveModel make_linear_model() {
  ConstitutiveModel m;
  m.theta = [](double u) { return u; };
  m.conductivity = [](double) { return 1.0; };
  m.kbar_z = [](double) { return 0.0; };
  m.L_theta = 1.0;
  m.u_star = 1.0;
  return m;
}

FrozenStep freeze_step(const Eigen::VectorXd& u_prev, double t_prev, double t_next,
                       const Scenario& sc) {
  const Mesh& mesh = sc.mesh;
  FrozenStep fs;
  fs.tau = t_next - t_prev;
  fs.mass = lumped_mass(mesh);

  // one-point frozen coefficients: K and Kbar at the element mean of u_{n-1}
  Eigen::VectorXd weight(mesh.n_elements());
  Eigen::MatrixXd kbar = Eigen::MatrixXd::Zero(mesh.n_elements(), mesh.dim);
  for (Eigen::Index e = 0; e < mesh.n_elements(); ++e) {
    double mean = 0.0;
    for (int v = 0; v <= mesh.dim; ++v) mean += u_prev(mesh.elements(e, v));
    mean /= (mesh.dim + 1);
    weight(e) = sc.model.conductivity(mean) + sc.epsilon;
    kbar(e, mesh.dim - 1) = sc.model.kbar_z(mean); // gravity acts along z
  }
  fs.stiffness = weighted_stiffness_elementwise(mesh, weight);
  fs.convection = convection_load_elementwise(mesh, kbar);

  Eigen::VectorXd s_nodal(mesh.n_nodes());
  fs.theta_prev.resize(mesh.n_nodes());
  for (Eigen::Index i = 0; i < mesh.n_nodes(); ++i) {
    s_nodal(i) = sc.source ? sc.source(mesh.x_coord(i), mesh.z_coord(i), t_prev, u_prev(i)) : 0.0;
    fs.theta_prev(i) = sc.model.theta(u_prev(i));
  }
  fs.source = source_load(fs.mass, s_nodal);

  if (!sc.dirichlet) throw std::invalid_argument("scenario: missing Dirichlet data");
  for (Eigen::Index i = 0; i < mesh.n_nodes(); ++i)
    if (mesh.is_boundary(i)) {
      fs.bc.nodes.push_back(static_cast<int>(i));
    }
  fs.bc.values.resize(static_cast<Eigen::Index>(fs.bc.nodes.size()));
  for (size_t k = 0; k < fs.bc.nodes.size(); ++k) {
    const auto i = fs.bc.nodes[k];
    fs.bc.values(static_cast<Eigen::Index>(k)) =
        sc.dirichlet(mesh.x_coord(i), mesh.z_coord(i), t_next);
  }
  fs.theta = sc.model.theta;
  return fs;
}

std::pair<Eigen::VectorXd, IterationHistory> step(const Eigen::VectorXd& u_prev, double t_prev,
                                                  double t_next, const Scenario& sc) {
  const FrozenStep fs = freeze_step(u_prev, t_prev, t_next, sc);
  LschemeResult r = lscheme_solve(u_prev, fs, sc.solver);
  return {std::move(r.u), std::move(r.history)};
}

namespace {

StepDiagnostics diagnose(const Eigen::VectorXd& u_prev, const Eigen::VectorXd& u_next,
                         const FrozenStep& fs, const Mesh& mesh) {
  StepDiagnostics d;
  d.min_u = u_next.minCoeff();
  d.max_u = u_next.maxCoeff();
  Eigen::VectorXd theta_next(u_next.size());
  for (Eigen::Index i = 0; i < u_next.size(); ++i) theta_next(i) = fs.theta(u_next(i));
  d.theta_mass = fs.mass.dot(theta_next);

  // unconstrained residual of the semi-discrete equation; Dirichlet rows
  // carry the discrete boundary flux, interior rows the solver error
  const Eigen::VectorXd r = fs.mass.cwiseProduct(theta_next - fs.theta_prev) +
                            fs.tau * (fs.stiffness * u_next + fs.convection - fs.source);
  double interior = 0.0, boundary = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    (mesh.is_boundary(i) ? boundary : interior) += r(i);
  d.boundary_flux = -boundary / fs.tau; // flux entering through Dirichlet nodes
  d.balance_residual = std::abs(interior);
  return d;
}

} // namespace

Trajectory run(const Scenario& sc) {
  if (sc.N < 1) throw std::invalid_argument("scenario: N must be >= 1");
  const std::string warn = sc.solver.check(sc.model.L_theta);
  (void)warn;

  Trajectory traj;
  traj.times.resize(sc.N + 1);
  traj.states.reserve(sc.N + 1);
  Eigen::VectorXd u(sc.mesh.n_nodes());
  for (Eigen::Index i = 0; i < sc.mesh.n_nodes(); ++i)
    u(i) = sc.initial ? sc.initial(sc.mesh.x_coord(i), sc.mesh.z_coord(i)) : 0.0;
  traj.times(0) = 0.0;
  traj.states.push_back(u);

  for (int n = 1; n <= sc.N; ++n) {
    const double t_prev = (n - 1) * sc.tau(), t_next = n * sc.tau();
    const FrozenStep fs = freeze_step(u, t_prev, t_next, sc);
    LschemeResult r = lscheme_solve(u, fs, sc.solver);
    if (!r.history.converged) {
      traj.all_converged = false;
      if (sc.abort_on_nonconvergence)
        throw std::runtime_error("run: L-scheme failed to converge at step " + std::to_string(n));
    }
    StepDiagnostics d = diagnose(u, r.u, fs, sc.mesh);
    d.lscheme_iters = static_cast<int>(r.history.iters.size());
    d.converged = r.history.converged;
    u = std::move(r.u);
    traj.times(n) = t_next;
    traj.states.push_back(u);
    traj.histories.push_back(std::move(r.history));
    traj.diagnostics.push_back(d);
  }
  return traj;
}

Trajectory run_regularized(Scenario sc, double eps) {
  sc.epsilon = eps;
  return run(sc);
}

} // namespace rdd
