#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rdd/constitutive.hpp"
#include "rdd/lscheme.hpp"
#include "rdd/timestepper.hpp"

using namespace rdd;

namespace {

// Two cells on [0,1]: one interior node, both ends Dirichlet. Small enough
// to write the iteration map down by hand.
FrozenStep three_node_step(std::function<double(double)> theta, double k_weight, double tau,
                           double g_left, double g_right) {
  const Mesh mesh = uniform_interval_mesh(2, 0.0, 1.0);
  FrozenStep fs;
  fs.tau = tau;
  fs.mass = lumped_mass(mesh);
  fs.stiffness =
      weighted_stiffness_elementwise(mesh, Eigen::VectorXd::Constant(2, k_weight));
  fs.convection = Eigen::VectorXd::Zero(3);
  fs.source = Eigen::VectorXd::Zero(3);
  fs.theta_prev = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < 3; ++i) fs.theta_prev(i) = theta(0.0);
  fs.bc.nodes = {0, 2};
  fs.bc.values.resize(2);
  fs.bc.values << g_left, g_right;
  fs.theta = std::move(theta);
  return fs;
}

ConstitutiveTable reference_table() {
  SoilParams p;
  p.b = 3.0 / 5.0;
  p.c = 5.0 / 3.0;
  p.a = 5.0 / 3.0;
  p.m = 0.6;
  return build_table(p);
}

} // namespace

TEST_CASE("config guards: L below L_theta/2 rejected, below L_theta warned") {
  LschemeConfig cfg;
  cfg.L = 0.4;
  CHECK_THROWS_AS((void)cfg.check(1.0), std::invalid_argument);
  cfg.L = 0.7;
  CHECK_FALSE(cfg.check(1.0).empty());
  cfg.L = 1.0;
  CHECK(cfg.check(1.0).empty());
}

TEST_CASE("single iteration matches the hand-computed update on three nodes") {
  // theta(u) = u/2, L = 1, k = 2, tau = 0.1, h = 1/2.
  // Interior equation of (L M + tau A) U = rhs with boundary lifting:
  //   (L m1 + 2 tau k / h) U1 = rhs1 + tau k (g_l + g_r) / h
  const double L = 1.0, k = 2.0, tau = 0.1, h = 0.5;
  auto theta = [](double u) { return 0.5 * u; };
  const FrozenStep fs = three_node_step(theta, k, tau, 0.2, 1.0);
  LschemeConfig cfg;
  cfg.L = L;
  cfg.lin_tol = 1e-15;

  Eigen::VectorXd u0(3);
  u0 << 0.0, 0.3, 0.0;
  const double m1 = fs.mass(1); // = h
  const double rhs1 = m1 * (L * u0(1) - theta(u0(1)) + theta(0.0));
  const double expect = (rhs1 + tau * k * (0.2 + 1.0) / h) / (L * m1 + 2.0 * tau * k / h);

  const DirichletSystem sys(SpMat(tau * fs.stiffness +
                                  SpMat(Eigen::VectorXd(L * fs.mass).asDiagonal())),
                            fs.bc, 3);
  const Eigen::VectorXd u1 = lscheme_step(u0, fs, sys, cfg);
  CHECK(u1(0) == doctest::Approx(0.2));
  CHECK(u1(2) == doctest::Approx(1.0));
  CHECK(u1(1) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("linear saturation with L = L_theta converges in one iteration") {
  auto theta = [](double u) { return u; };
  const FrozenStep fs = three_node_step(theta, 1.0, 0.05, 0.0, 1.0);
  LschemeConfig cfg;
  cfg.L = 1.0;
  cfg.atol = 1e-15;
  cfg.rtol = 0.0;
  cfg.lin_tol = 1e-15;
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(3);
  const LschemeResult r = lscheme_solve(u0, fs, cfg);
  REQUIRE(r.history.iters.size() >= 2);
  CHECK(r.history.iters[1].increment_norm < 1e-13); // second pass changes nothing
}

TEST_CASE("degenerate step: contraction with non-increasing error sequence") {
  const ConstitutiveTable table = reference_table();
  const Mesh mesh = uniform_interval_mesh(40, 0.0, 1.0);
  Scenario sc;
  sc.mesh = mesh;
  sc.model = make_table_model(std::make_shared<const ConstitutiveTable>(table));
  sc.T = 0.1;
  sc.N = 1;
  const double us = table.u_star;
  sc.initial = [us](double, double z) { return us * z; }; // dry bottom, wet top
  sc.dirichlet = [us](double, double z, double) { return us * z; };
  sc.solver.lin_tol = 1e-14;

  Eigen::VectorXd u0(mesh.n_nodes());
  for (Eigen::Index i = 0; i < mesh.n_nodes(); ++i) u0(i) = sc.initial(0.0, mesh.z_coord(i));
  const FrozenStep fs = freeze_step(u0, 0.0, sc.tau(), sc);
  const Eigen::VectorXd mass = lumped_mass(mesh);

  LschemeConfig tight = sc.solver;
  tight.L = 1.0;
  tight.atol = 1e-13;
  tight.rtol = 0.0;
  tight.max_iters = 3000;
  tight.store_iterates = false;
  const Eigen::VectorXd ref = lscheme_solve(u0, fs, tight).u;

  LschemeConfig cfg = sc.solver;
  cfg.L = table.L_theta;
  cfg.atol = 1e-10;
  cfg.rtol = 0.0;
  const LschemeResult r = lscheme_solve(u0, fs, cfg);
  CHECK(r.history.converged);

  double prev = mass_norm(mass, u0 - ref);
  for (const auto& it : r.history.iterates) {
    const double err = mass_norm(mass, it - ref);
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
}

TEST_CASE("iteration satisfies the energy decay inequality") {
  // L/2 (||e^i||^2 - ||e^{i-1}||^2) + tau |e^i|_omega^2 <= 0 per iteration.
  const ConstitutiveTable table = reference_table();
  Scenario sc;
  sc.mesh = uniform_interval_mesh(25, 0.0, 1.0);
  sc.model = make_table_model(std::make_shared<const ConstitutiveTable>(table));
  sc.T = 0.05;
  sc.N = 1;
  const double us = table.u_star;
  sc.initial = [us](double, double z) { return 0.2 * us + 0.6 * us * z; };
  sc.dirichlet = [us](double, double z, double) { return 0.2 * us + 0.6 * us * z; };
  sc.solver.lin_tol = 1e-14;

  Eigen::VectorXd u0(sc.mesh.n_nodes());
  for (Eigen::Index i = 0; i < sc.mesh.n_nodes(); ++i)
    u0(i) = sc.initial(0.0, sc.mesh.z_coord(i));
  const FrozenStep fs = freeze_step(u0, 0.0, sc.tau(), sc);
  const Eigen::VectorXd mass = lumped_mass(sc.mesh);

  LschemeConfig tight = sc.solver;
  tight.L = 1.0;
  tight.atol = 1e-13;
  tight.rtol = 0.0;
  tight.max_iters = 3000;
  tight.store_iterates = false;
  const Eigen::VectorXd ref = lscheme_solve(u0, fs, tight).u;

  LschemeConfig cfg = sc.solver;
  cfg.L = 1.0;
  cfg.atol = 1e-9;
  cfg.rtol = 0.0;
  const LschemeResult r = lscheme_solve(u0, fs, cfg);
  Eigen::VectorXd prev = u0;
  for (const auto& it : r.history.iterates) {
    const double e_prev = mass_norm(mass, prev - ref);
    const double e_curr = mass_norm(mass, it - ref);
    const double semi = weighted_seminorm(fs.stiffness, it - ref);
    const double lhs =
        0.5 * cfg.L * (e_curr * e_curr - e_prev * e_prev) + fs.tau * semi * semi;
    if (e_curr > 1e-12) CHECK(lhs <= 1e-11);
    prev = it;
  }
}

TEST_CASE("cg failure surfaces as a typed exception") {
  const Mesh mesh = uniform_interval_mesh(100, 0.0, 1.0);
  FrozenStep fs;
  fs.tau = 0.05;
  fs.mass = lumped_mass(mesh);
  fs.stiffness = weighted_stiffness_elementwise(
      mesh, Eigen::VectorXd::Constant(mesh.n_elements(), 1.0));
  fs.convection = Eigen::VectorXd::Zero(mesh.n_nodes());
  fs.source = Eigen::VectorXd::Ones(mesh.n_nodes());
  fs.theta_prev = Eigen::VectorXd::Zero(mesh.n_nodes());
  fs.bc.nodes = {0, 100};
  fs.bc.values = Eigen::VectorXd::Zero(2);
  fs.theta = [](double u) { return u; };

  LschemeConfig cfg;
  cfg.L = 1.0;
  cfg.lin_tol = 1e-15;
  cfg.lin_max_iters = 1; // starve the inner solver
  const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(mesh.n_nodes());
  const DirichletSystem sys(
      SpMat(fs.tau * fs.stiffness + SpMat(Eigen::VectorXd(cfg.L * fs.mass).asDiagonal())),
      fs.bc, mesh.n_nodes());
  CHECK_THROWS_AS((void)lscheme_step(u0, fs, sys, cfg), CgFailure);
}
