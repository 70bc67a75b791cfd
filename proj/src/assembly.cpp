#include "rdd/assembly.hpp"

#include <stdexcept>

namespace rdd {

Eigen::VectorXd lumped_mass(const Mesh& mesh) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.n_nodes());
  const double share = 1.0 / (mesh.dim + 1);
  for (Eigen::Index e = 0; e < mesh.n_elements(); ++e) {
    const double w = mesh.element_measure(e) * share;
    for (int v = 0; v <= mesh.dim; ++v) m(mesh.elements(e, v)) += w;
  }
  return m;
}

SpMat weighted_stiffness_elementwise(const Mesh& mesh, const Eigen::VectorXd& elem_weight) {
  if (elem_weight.size() != mesh.n_elements())
    throw std::invalid_argument("stiffness: weight size mismatch");
  if ((elem_weight.array() < 0.0).any())
    throw std::invalid_argument("stiffness: negative weight");
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.n_elements() * (mesh.dim + 1) * (mesh.dim + 1));
  for (Eigen::Index e = 0; e < mesh.n_elements(); ++e) {
    const Eigen::MatrixXd g = mesh.grad_basis(e);
    const double scale = elem_weight(e) * mesh.element_measure(e);
    for (int i = 0; i <= mesh.dim; ++i)
      for (int j = 0; j <= mesh.dim; ++j)
        trips.emplace_back(mesh.elements(e, i), mesh.elements(e, j),
                           scale * g.row(i).dot(g.row(j)));
  }
  SpMat a(mesh.n_nodes(), mesh.n_nodes());
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

SpMat weighted_stiffness(const Mesh& mesh, const Eigen::VectorXd& nodal_weight) {
  if (nodal_weight.size() != mesh.n_nodes())
    throw std::invalid_argument("stiffness: weight size mismatch");
  if ((nodal_weight.array() < 0.0).any())
    throw std::invalid_argument("stiffness: negative weight");
  Eigen::VectorXd ew(mesh.n_elements());
  for (Eigen::Index e = 0; e < mesh.n_elements(); ++e) {
    double s = 0.0;
    for (int v = 0; v <= mesh.dim; ++v) s += nodal_weight(mesh.elements(e, v));
    ew(e) = s / (mesh.dim + 1);
  }
  return weighted_stiffness_elementwise(mesh, ew);
}

Eigen::VectorXd convection_load_elementwise(const Mesh& mesh, const Eigen::MatrixXd& kbar_elem) {
  if (kbar_elem.rows() != mesh.n_elements() || kbar_elem.cols() != mesh.dim)
    throw std::invalid_argument("convection: kbar size mismatch");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(mesh.n_nodes());
  for (Eigen::Index e = 0; e < mesh.n_elements(); ++e) {
    const Eigen::MatrixXd g = mesh.grad_basis(e);
    const double vol = mesh.element_measure(e);
    for (int v = 0; v <= mesh.dim; ++v)
      f(mesh.elements(e, v)) += vol * g.row(v).dot(kbar_elem.row(e));
  }
  return f;
}

Eigen::VectorXd convection_load(const Mesh& mesh, const Eigen::MatrixXd& kbar_nodal) {
  if (kbar_nodal.rows() != mesh.n_nodes() || kbar_nodal.cols() != mesh.dim)
    throw std::invalid_argument("convection: kbar size mismatch");
  Eigen::MatrixXd ke = Eigen::MatrixXd::Zero(mesh.n_elements(), mesh.dim);
  for (Eigen::Index e = 0; e < mesh.n_elements(); ++e) {
    for (int v = 0; v <= mesh.dim; ++v) ke.row(e) += kbar_nodal.row(mesh.elements(e, v));
    ke.row(e) /= (mesh.dim + 1);
  }
  return convection_load_elementwise(mesh, ke);
}

Eigen::VectorXd source_load(const Eigen::VectorXd& mass, const Eigen::VectorXd& s_nodal) {
  if (mass.size() != s_nodal.size()) throw std::invalid_argument("source: size mismatch");
  return mass.cwiseProduct(s_nodal);
}

DirichletSystem::DirichletSystem(const SpMat& a_raw, const DirichletBC& bc, Eigen::Index n) {
  is_bc_.assign(n, 0);
  lift_ = Eigen::VectorXd::Zero(n);
  for (size_t k = 0; k < bc.nodes.size(); ++k) {
    if (bc.nodes[k] < 0 || bc.nodes[k] >= n)
      throw std::invalid_argument("dirichlet: node index out of range");
    is_bc_[bc.nodes[k]] = 1;
    lift_(bc.nodes[k]) = bc.values(static_cast<Eigen::Index>(k));
  }
  correction_ = a_raw * lift_;
  for (Eigen::Index i = 0; i < n; ++i)
    if (is_bc_[i]) correction_(i) = 0.0;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a_raw.nonZeros() + n);
  for (int k = 0; k < a_raw.outerSize(); ++k)
    for (SpMat::InnerIterator it(a_raw, k); it; ++it)
      if (!is_bc_[it.row()] && !is_bc_[it.col()])
        trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (Eigen::Index i = 0; i < n; ++i)
    if (is_bc_[i]) trips.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
  a_constrained_.resize(n, n);
  a_constrained_.setFromTriplets(trips.begin(), trips.end());
}

Eigen::VectorXd DirichletSystem::constrain_rhs(const Eigen::VectorXd& b) const {
  Eigen::VectorXd out = b - correction_;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (is_bc_[i]) out(i) = lift_(i);
  return out;
}

} // namespace rdd
