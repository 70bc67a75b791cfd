#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace rdd {

/// Boundary tags. 1D meshes use Left/Right; 2D structured meshes tag the
/// rectangle perimeter (corners go to Bottom/Top).
enum class BoundaryTag : int { Interior = -1, Left = 0, Right = 1, Bottom = 2, Top = 3 };

/// Simplicial mesh: 1D intervals or 2D triangles, immutable after build.
/// Node coordinates are (x) in 1D and (x, z) in 2D with z pointing up.
struct Mesh {
  int dim = 1;
  Eigen::MatrixXd nodes;    // n_nodes x dim
  Eigen::MatrixXi elements; // n_elements x (dim+1)
  Eigen::VectorXi boundary_tag; // per node, -1 interior

  Eigen::Index n_nodes() const { return nodes.rows(); }
  Eigen::Index n_elements() const { return elements.rows(); }
  bool is_boundary(Eigen::Index i) const { return boundary_tag(i) >= 0; }
  std::vector<int> boundary_nodes() const;

  /// Length (1D) or area (2D) of element e; positive for valid meshes.
  double element_measure(Eigen::Index e) const;
  /// Constant P1 basis gradients on element e, (dim+1) x dim.
  Eigen::MatrixXd grad_basis(Eigen::Index e) const;
  /// For 1D meshes the single coordinate is the vertical z; returns the
  /// z-coordinate of node i in either dimension.
  double z_coord(Eigen::Index i) const { return nodes(i, dim - 1); }
  double x_coord(Eigen::Index i) const { return dim == 1 ? 0.0 : nodes(i, 0); }
};

/// n_cells equal segments on [x0, x1]; boundary = {first, last}.
Mesh uniform_interval_mesh(int n_cells, double x0, double x1);

/// Structured triangulation of [x0,x1] x [z0,z1], nx*ny cells split along a
/// fixed diagonal: (nx+1)(ny+1) nodes, 2 nx ny triangles.
Mesh structured_triangle_mesh(int nx, int ny, double x0, double x1, double z0, double z1);

} // namespace rdd
