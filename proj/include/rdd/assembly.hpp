#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

#include "rdd/mesh.hpp"

namespace rdd {

using SpMat = Eigen::SparseMatrix<double>;

/// Row-sum lumped P1 mass: node entry = sum over adjacent elements of
/// |element| / (dim+1). Entries are positive and sum to |Omega|.
Eigen::VectorXd lumped_mass(const Mesh& mesh);

/// Weighted stiffness int omega^2 grad(phi_i).grad(phi_j) with a constant
/// weight per element. Symmetric PSD with zero row sums; rejects negative
/// weights.
SpMat weighted_stiffness_elementwise(const Mesh& mesh, const Eigen::VectorXd& elem_weight);

/// Same with nodal weight values; the element weight is the vertex average.
SpMat weighted_stiffness(const Mesh& mesh, const Eigen::VectorXd& nodal_weight);

/// Convection load F_i = sum_e |e| Kbar_e . grad(phi_i)|_e with a constant
/// vector per element (n_elements x dim).
Eigen::VectorXd convection_load_elementwise(const Mesh& mesh, const Eigen::MatrixXd& kbar_elem);

/// Nodal variant: element value is the vertex average (n_nodes x dim).
Eigen::VectorXd convection_load(const Mesh& mesh, const Eigen::MatrixXd& kbar_nodal);

/// Lumped source load, entry i = mass_i * S_i.
Eigen::VectorXd source_load(const Eigen::VectorXd& mass, const Eigen::VectorXd& s_nodal);

struct DirichletBC {
  std::vector<int> nodes;
  Eigen::VectorXd values; // aligned with nodes
};

/// Symmetric elimination of Dirichlet rows/columns, reusable across right-hand
/// sides: the constrained matrix keeps its SPD structure (identity on
/// constrained diagonal) and constrain_rhs moves the known values over.
class DirichletSystem {
 public:
  DirichletSystem(const SpMat& a_raw, const DirichletBC& bc, Eigen::Index n);

  const SpMat& matrix() const { return a_constrained_; }
  /// b -> b - A_raw g on free rows, g on constrained rows.
  Eigen::VectorXd constrain_rhs(const Eigen::VectorXd& b) const;
  const std::vector<char>& constrained() const { return is_bc_; }
  const Eigen::VectorXd& lifted_values() const { return lift_; }

 private:
  SpMat a_constrained_;
  Eigen::VectorXd lift_;       // g extended by zero
  Eigen::VectorXd correction_; // A_raw * lift on free rows
  std::vector<char> is_bc_;
};

} // namespace rdd
