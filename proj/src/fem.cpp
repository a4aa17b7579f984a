#include "membrane/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace membrane {

void check_density(const Mesh& mesh, const DensityField& theta) {
  if (theta.values.size() != mesh.num_triangles()) {
    throw std::invalid_argument("density has " + std::to_string(theta.values.size()) +
                                " values but the mesh has " +
                                std::to_string(mesh.num_triangles()) + " triangles");
  }
  for (double v : theta.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("density values must be finite and nonnegative");
    }
  }
}

double lp_mass(std::span<const double> areas, std::span<const double> theta, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_mass: exponent must be >= 1");
  if (areas.size() != theta.size()) throw std::invalid_argument("lp_mass: size mismatch");
  double largest = 0.0;
  for (double v : theta) largest = std::max(largest, std::fabs(v));
  if (largest == 0.0) return 0.0;
  // Scaled by the largest value so theta^p cannot overflow.
  const double sum = kernels::omp::power_sum(areas, theta, largest, p);
  return largest * std::pow(sum, 1.0 / p);
}

double lp_mass(const Mesh& mesh, const DensityField& theta, double p) {
  check_density(mesh, theta);
  return lp_mass(mesh.areas(), theta.values, p);
}

DofMap DofMap::build(const Mesh& mesh, Block block) {
  DofMap map;
  map.dof_of_node.assign(mesh.num_nodes(), -1);
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(mesh.num_nodes()); ++v) {
    if (block == Block::kAllNodes || !mesh.is_boundary(v)) {
      map.dof_of_node[v] = static_cast<std::int32_t>(map.node_of_dof.size());
      map.node_of_dof.push_back(v);
    }
  }
  return map;
}

std::vector<double> DofMap::restrict_to_dofs(std::span<const double> nodal) const {
  if (nodal.size() != dof_of_node.size()) throw std::invalid_argument("nodal vector size mismatch");
  std::vector<double> out(node_of_dof.size());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = nodal[node_of_dof[d]];
  return out;
}

std::vector<double> DofMap::extend_to_nodes(std::span<const double> dofs) const {
  if (dofs.size() != node_of_dof.size()) throw std::invalid_argument("dof vector size mismatch");
  std::vector<double> out(dof_of_node.size(), 0.0);
  for (std::size_t d = 0; d < dofs.size(); ++d) out[node_of_dof[d]] = dofs[d];
  return out;
}

kernels::LocalMatrix local_stiffness_matrix(const Point& a, const Point& b, const Point& c) {
  const double area = signed_area(a, b, c);
  if (!(area > 0.0)) throw std::invalid_argument("degenerate or clockwise triangle");
  const std::array<Vec2, 3> g = {Vec2{b.y - c.y, c.x - b.x}, Vec2{c.y - a.y, a.x - c.x},
                                 Vec2{a.y - b.y, b.x - a.x}};
  kernels::LocalMatrix k{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) k[3 * i + j] = (g[i].x * g[j].x + g[i].y * g[j].y) / (4.0 * area);
  }
  return k;
}

kernels::LocalMatrix local_mass_matrix(const Point& a, const Point& b, const Point& c) {
  const double area = signed_area(a, b, c);
  if (!(area > 0.0)) throw std::invalid_argument("degenerate or clockwise triangle");
  kernels::LocalMatrix k{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) k[3 * i + j] = area / 12.0 * (i == j ? 2.0 : 1.0);
  }
  return k;
}

FemSpace::FemSpace(const Mesh& mesh, Block block)
    : mesh_(&mesh), block_(block), dofs_(DofMap::build(mesh, block)) {
  const auto nodes = mesh.nodes();
  const auto tris = mesh.triangles();
  basis_.resize(tris.size());
  local_stiffness_.resize(tris.size());
  local_mass_.resize(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const Point& a = nodes[tris[t][0]];
    const Point& b = nodes[tris[t][1]];
    const Point& c = nodes[tris[t][2]];
    const double two_area = 2.0 * signed_area(a, b, c);
    basis_[t] = {Vec2{(b.y - c.y) / two_area, (c.x - b.x) / two_area},
                 Vec2{(c.y - a.y) / two_area, (a.x - c.x) / two_area},
                 Vec2{(a.y - b.y) / two_area, (b.x - a.x) / two_area}};
    local_stiffness_[t] = local_stiffness_matrix(a, b, c);
    local_mass_[t] = local_mass_matrix(a, b, c);
  }

  // (row, col, triangle, slot), sorted: fixes both the CSR layout and the
  // summation order of every entry.
  std::vector<std::tuple<std::int32_t, std::int32_t, std::int32_t, std::uint8_t>> contributions;
  contributions.reserve(9 * tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    for (int i = 0; i < 3; ++i) {
      const auto row = dofs_.dof_of_node[tris[t][i]];
      if (row < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const auto col = dofs_.dof_of_node[tris[t][j]];
        if (col < 0) continue;
        contributions.emplace_back(row, col, static_cast<std::int32_t>(t),
                                   static_cast<std::uint8_t>(3 * i + j));
      }
    }
  }
  std::sort(contributions.begin(), contributions.end());

  pattern_.rows = static_cast<std::int32_t>(dofs_.size());
  pattern_.row_ptr.assign(pattern_.rows + 1, 0);
  plan_.triangle.reserve(contributions.size());
  plan_.slot.reserve(contributions.size());
  for (std::size_t k = 0; k < contributions.size(); ++k) {
    const auto [row, col, tri, slot] = contributions[k];
    const bool new_entry = k == 0 || std::get<0>(contributions[k - 1]) != row ||
                           std::get<1>(contributions[k - 1]) != col;
    if (new_entry) {
      if (!pattern_.cols.empty()) plan_.entry_ptr.push_back(static_cast<std::int32_t>(k));
      pattern_.cols.push_back(col);
      ++pattern_.row_ptr[row + 1];
    }
    plan_.triangle.push_back(tri);
    plan_.slot.push_back(slot);
  }
  plan_.entry_ptr.push_back(static_cast<std::int32_t>(contributions.size()));
  for (std::int32_t i = 0; i < pattern_.rows; ++i) pattern_.row_ptr[i + 1] += pattern_.row_ptr[i];
  pattern_.values.assign(pattern_.cols.size(), 0.0);
}

CsrMatrix FemSpace::assemble(std::span<const kernels::LocalMatrix> local,
                             std::span<const double> weight) const {
  CsrMatrix a = pattern_;
  kernels::omp::gather(plan_, local, weight, a.values);
  return a;
}

CsrMatrix FemSpace::stiffness(const DensityField& theta, double m) const {
  check_density(*mesh_, theta);
  if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("stiffness m must be >= 0");
  std::vector<double> coefficient(theta.values.size());
  for (std::size_t t = 0; t < coefficient.size(); ++t) coefficient[t] = 1.0 + m * theta.values[t];
  return assemble(local_stiffness_, coefficient);
}

CsrMatrix FemSpace::weighted_stiffness(std::span<const double> coefficient) const {
  if (coefficient.size() != mesh_->num_triangles()) {
    throw std::invalid_argument("coefficient size does not match the mesh");
  }
  return assemble(local_stiffness_, coefficient);
}

CsrMatrix FemSpace::mass() const {
  const std::vector<double> ones(mesh_->num_triangles(), 1.0);
  return assemble(local_mass_, ones);
}

std::vector<Vec2> FemSpace::gradients(std::span<const double> nodal) const {
  if (nodal.size() != mesh_->num_nodes()) {
    throw std::invalid_argument("gradients: need one value per mesh node");
  }
  std::vector<Vec2> grad(mesh_->num_triangles());
  kernels::omp::element_gradients(mesh_->triangles(), basis_, nodal, grad);
  return grad;
}

std::vector<double> FemSpace::gradient_norms(std::span<const double> nodal) const {
  const auto grad = gradients(nodal);
  std::vector<double> out(grad.size());
  for (std::size_t t = 0; t < grad.size(); ++t) out[t] = std::hypot(grad[t].x, grad[t].y);
  return out;
}

CsrMatrix assemble_stiffness(const Mesh& mesh, const DensityField& theta, double m, Block block) {
  return FemSpace(mesh, block).stiffness(theta, m);
}

CsrMatrix assemble_mass(const Mesh& mesh, Block block) { return FemSpace(mesh, block).mass(); }

std::vector<Vec2> element_gradients(const Mesh& mesh, std::span<const double> nodal) {
  if (nodal.size() != mesh.num_nodes()) {
    throw std::invalid_argument("element_gradients: need one value per mesh node");
  }
  const auto nodes = mesh.nodes();
  const auto tris = mesh.triangles();
  std::vector<kernels::TriangleBasis> basis(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const Point& a = nodes[tris[t][0]];
    const Point& b = nodes[tris[t][1]];
    const Point& c = nodes[tris[t][2]];
    const double two_area = 2.0 * signed_area(a, b, c);
    if (!(two_area > 0.0)) throw std::invalid_argument("element_gradients: degenerate triangle");
    basis[t] = {Vec2{(b.y - c.y) / two_area, (c.x - b.x) / two_area},
                Vec2{(c.y - a.y) / two_area, (a.x - c.x) / two_area},
                Vec2{(a.y - b.y) / two_area, (b.x - a.x) / two_area}};
  }
  std::vector<Vec2> grad(tris.size());
  kernels::omp::element_gradients(tris, basis, nodal, grad);
  return grad;
}

std::vector<double> gradient_norms(const Mesh& mesh, std::span<const double> nodal) {
  const auto grad = element_gradients(mesh, nodal);
  std::vector<double> out(grad.size());
  for (std::size_t t = 0; t < grad.size(); ++t) out[t] = std::hypot(grad[t].x, grad[t].y);
  return out;
}

}  // namespace membrane
