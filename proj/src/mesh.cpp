#include "rdd/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace rdd {

std::vector<int> Mesh::boundary_nodes() const {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < n_nodes(); ++i)
    if (is_boundary(i)) out.push_back(static_cast<int>(i));
  return out;
}

double Mesh::element_measure(Eigen::Index e) const {
  if (dim == 1) {
    return std::abs(nodes(elements(e, 1), 0) - nodes(elements(e, 0), 0));
  }
  const auto p0 = nodes.row(elements(e, 0));
  const auto p1 = nodes.row(elements(e, 1));
  const auto p2 = nodes.row(elements(e, 2));
  const double det =
      (p1(0) - p0(0)) * (p2(1) - p0(1)) - (p2(0) - p0(0)) * (p1(1) - p0(1));
  return 0.5 * std::abs(det);
}

Eigen::MatrixXd Mesh::grad_basis(Eigen::Index e) const {
  Eigen::MatrixXd g(dim + 1, dim);
  if (dim == 1) {
    const double h = nodes(elements(e, 1), 0) - nodes(elements(e, 0), 0);
    g(0, 0) = -1.0 / h;
    g(1, 0) = 1.0 / h;
    return g;
  }
  const auto p0 = nodes.row(elements(e, 0));
  const auto p1 = nodes.row(elements(e, 1));
  const auto p2 = nodes.row(elements(e, 2));
  const double det =
      (p1(0) - p0(0)) * (p2(1) - p0(1)) - (p2(0) - p0(0)) * (p1(1) - p0(1));
  // gradients of barycentric coordinates
  g(0, 0) = (p1(1) - p2(1)) / det;
  g(0, 1) = (p2(0) - p1(0)) / det;
  g(1, 0) = (p2(1) - p0(1)) / det;
  g(1, 1) = (p0(0) - p2(0)) / det;
  g(2, 0) = (p0(1) - p1(1)) / det;
  g(2, 1) = (p1(0) - p0(0)) / det;
  return g;
}

Mesh uniform_interval_mesh(int n_cells, double x0, double x1) {
  if (n_cells < 1) throw std::invalid_argument("mesh: n_cells must be >= 1");
  if (!(x1 > x0)) throw std::invalid_argument("mesh: require x1 > x0");
  Mesh m;
  m.dim = 1;
  m.nodes.resize(n_cells + 1, 1);
  for (int i = 0; i <= n_cells; ++i)
    m.nodes(i, 0) = x0 + (x1 - x0) * static_cast<double>(i) / n_cells;
  m.elements.resize(n_cells, 2);
  for (int e = 0; e < n_cells; ++e) {
    m.elements(e, 0) = e;
    m.elements(e, 1) = e + 1;
  }
  m.boundary_tag = Eigen::VectorXi::Constant(n_cells + 1, -1);
  m.boundary_tag(0) = static_cast<int>(BoundaryTag::Left);
  m.boundary_tag(n_cells) = static_cast<int>(BoundaryTag::Right);
  return m;
}

Mesh structured_triangle_mesh(int nx, int ny, double x0, double x1, double z0, double z1) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("mesh: nx, ny must be >= 1");
  if (!(x1 > x0) || !(z1 > z0)) throw std::invalid_argument("mesh: invalid rectangle bounds");
  Mesh m;
  m.dim = 2;
  const int nnx = nx + 1, nnz = ny + 1;
  m.nodes.resize(nnx * nnz, 2);
  m.boundary_tag = Eigen::VectorXi::Constant(nnx * nnz, -1);
  auto id = [&](int i, int j) { return j * nnx + i; };
  for (int j = 0; j < nnz; ++j)
    for (int i = 0; i < nnx; ++i) {
      m.nodes(id(i, j), 0) = x0 + (x1 - x0) * static_cast<double>(i) / nx;
      m.nodes(id(i, j), 1) = z0 + (z1 - z0) * static_cast<double>(j) / ny;
      int tag = -1;
      if (i == 0) tag = static_cast<int>(BoundaryTag::Left);
      if (i == nx) tag = static_cast<int>(BoundaryTag::Right);
      if (j == 0) tag = static_cast<int>(BoundaryTag::Bottom);
      if (j == ny) tag = static_cast<int>(BoundaryTag::Top);
      m.boundary_tag(id(i, j)) = tag;
    }
  m.elements.resize(2 * nx * ny, 3);
  int e = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      // fixed diagonal from (i,j) to (i+1,j+1)
      m.elements.row(e++) << id(i, j), id(i + 1, j), id(i + 1, j + 1);
      m.elements.row(e++) << id(i, j), id(i + 1, j + 1), id(i, j + 1);
    }
  return m;
}

} // namespace rdd
