// Test-side oracles, deliberately independent of the library's evaluation
// paths: adaptive-Simpson quadrature for the saturation transform, dense
// brute-force P1 assembly, and dense constrained solves.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "rdd/mesh.hpp"

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  // accept once the correction is within tolerance or at rounding level;
  // the depth cap stops pathological refinement near endpoint singularities
  const double rounding = 1e-15 * (std::abs(left) + std::abs(right));
  if (std::abs(left + right - whole) <= 15.0 * tol + rounding || depth <= 0)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
  const double m = 0.5 * (a + b);
  return simpson(f, a, b, f(a), f(m), f(b), tol, 60);
}

/// u* = integral_0^1 (1 - s^c)^{-b} ds via the substitution
/// v = (1 - s)^{1-b}, which removes the endpoint singularity: the
/// transformed integrand tends to c^{-b} / (1 - b) as v -> 0.
inline double u_star_quadrature(double b, double c, double tol = 1e-11) {
  if (b == 0.0) return 1.0;
  const double p = 1.0 / (1.0 - b);
  auto f = [b, c, p](double v) -> double {
    if (v <= 0.0) return std::pow(c, -b) / (1.0 - b);
    const double w = std::pow(v, p);                              // 1 - s
    if (w >= 1.0) return 1.0 / (1.0 - b);                         // s = 0
    const double log_s = std::log1p(-w);                          // stable for tiny w
    const double one_minus_sc = -std::expm1(c * log_s);           // 1 - s^c
    return std::exp(-b * std::log(one_minus_sc) + (b * p) * std::log(v)) / (1.0 - b);
  };
  return integrate(f, 0.0, 1.0, tol);
}

/// U(theta) = integral_0^theta (1 - s^c)^{-b} ds for theta in [0, 1),
/// regular quadrature away from the singular endpoint.
inline double transform_quadrature(double theta, double b, double c, double tol = 1e-11) {
  if (theta <= 0.0) return 0.0;
  auto f = [b, c](double s) { return std::pow(1.0 - std::pow(s, c), -b); };
  return integrate(f, 0.0, theta, tol);
}

/// Dense P1 gradients computed from first principles: rows of the inverse of
/// the barycentric matrix [1 | coordinates].
inline Eigen::MatrixXd dense_grad_basis(const rdd::Mesh& mesh, Eigen::Index e) {
  const int nv = mesh.dim + 1;
  Eigen::MatrixXd vm(nv, nv);
  for (int v = 0; v < nv; ++v) {
    vm(v, 0) = 1.0;
    for (int d = 0; d < mesh.dim; ++d) vm(v, d + 1) = mesh.nodes(mesh.elements(e, v), d);
  }
  const Eigen::MatrixXd inv = vm.inverse();
  Eigen::MatrixXd g(nv, mesh.dim);
  for (int v = 0; v < nv; ++v)
    for (int d = 0; d < mesh.dim; ++d) g(v, d) = inv(d + 1, v);
  return g;
}

inline double dense_measure(const rdd::Mesh& mesh, Eigen::Index e) {
  if (mesh.dim == 1)
    return std::abs(mesh.nodes(mesh.elements(e, 1), 0) - mesh.nodes(mesh.elements(e, 0), 0));
  const auto p0 = mesh.nodes.row(mesh.elements(e, 0));
  const auto p1 = mesh.nodes.row(mesh.elements(e, 1));
  const auto p2 = mesh.nodes.row(mesh.elements(e, 2));
  return 0.5 * std::abs((p1(0) - p0(0)) * (p2(1) - p0(1)) - (p2(0) - p0(0)) * (p1(1) - p0(1)));
}

inline Eigen::MatrixXd dense_weighted_stiffness(const rdd::Mesh& mesh,
                                                const Eigen::VectorXd& elem_weight) {
  const auto n = mesh.n_nodes();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index e = 0; e < mesh.n_elements(); ++e) {
    const Eigen::MatrixXd g = dense_grad_basis(mesh, e);
    const double scale = elem_weight(e) * dense_measure(mesh, e);
    for (int i = 0; i <= mesh.dim; ++i)
      for (int j = 0; j <= mesh.dim; ++j)
        a(mesh.elements(e, i), mesh.elements(e, j)) += scale * g.row(i).dot(g.row(j));
  }
  return a;
}

inline Eigen::VectorXd dense_convection_load(const rdd::Mesh& mesh,
                                             const Eigen::MatrixXd& kbar_elem) {
  const auto n = mesh.n_nodes();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (Eigen::Index e = 0; e < mesh.n_elements(); ++e) {
    const Eigen::MatrixXd g = dense_grad_basis(mesh, e);
    const double measure = dense_measure(mesh, e);
    for (int i = 0; i <= mesh.dim; ++i)
      f(mesh.elements(e, i)) += measure * g.row(i).dot(kbar_elem.row(e));
  }
  return f;
}

/// Dense constrained solve: overwrite Dirichlet rows with identity equations
/// and solve with a direct factorization.
inline Eigen::VectorXd dense_constrained_solve(Eigen::MatrixXd a, Eigen::VectorXd rhs,
                                               const std::vector<int>& bc_nodes,
                                               const Eigen::VectorXd& bc_values) {
  for (std::size_t k = 0; k < bc_nodes.size(); ++k) {
    const int i = bc_nodes[k];
    a.row(i).setZero();
    a(i, i) = 1.0;
    rhs(i) = bc_values(static_cast<Eigen::Index>(k));
  }
  return Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(rhs);
}

/// Central finite difference of a scalar function.
inline double fd_derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace oracles
