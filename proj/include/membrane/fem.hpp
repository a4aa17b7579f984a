#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "membrane/kernels.hpp"
#include "membrane/mesh.hpp"
#include "membrane/sparse.hpp"

namespace membrane {

using kernels::Vec2;

// Piecewise-constant reinforcement density, one value per triangle.
// `p` records the exponent of the class the field was built for.
struct DensityField {
  std::vector<double> values;
  double p = 1.0;

  static DensityField zero(const Mesh& mesh, double p = 1.0) {
    return {std::vector<double>(mesh.num_triangles(), 0.0), p};
  }
  static DensityField uniform(const Mesh& mesh, double value, double p = 1.0) {
    return {std::vector<double>(mesh.num_triangles(), value), p};
  }
};

// Throws std::invalid_argument if the field does not have one finite,
// nonnegative value per triangle of `mesh`.
void check_density(const Mesh& mesh, const DensityField& theta);

// (sum_T area_T theta_T^p)^(1/p)
double lp_mass(std::span<const double> areas, std::span<const double> theta, double p);
double lp_mass(const Mesh& mesh, const DensityField& theta, double p);
inline double lp_mass(const Mesh& mesh, const DensityField& theta) {
  return lp_mass(mesh, theta, theta.p);
}

// Which unknowns a matrix acts on. kInterior drops Dirichlet (boundary) rows
// and columns; kAllNodes keeps every node.
enum class Block { kInterior, kAllNodes };

// Numbering of the unknowns of a Block.
struct DofMap {
  std::vector<std::int32_t> dof_of_node;  // -1 for eliminated nodes
  std::vector<std::int32_t> node_of_dof;

  static DofMap build(const Mesh& mesh, Block block);
  std::size_t size() const { return node_of_dof.size(); }
  std::vector<double> restrict_to_dofs(std::span<const double> nodal) const;
  // Eliminated nodes get 0.
  std::vector<double> extend_to_nodes(std::span<const double> dofs) const;
};

// P1 discretization of a mesh. Holds the per-triangle geometry and the
// gather plans so repeated assembly for new densities only reweights
// precomputed local matrices.
class FemSpace {
 public:
  explicit FemSpace(const Mesh& mesh, Block block = Block::kInterior);

  const Mesh& mesh() const { return *mesh_; }
  const DofMap& dofs() const { return dofs_; }
  Block block() const { return block_; }

  // sum_T (1 + m theta_T) int_T grad phi_i . grad phi_j
  CsrMatrix stiffness(const DensityField& theta, double m) const;
  // sum_T coefficient_T int_T grad phi_i . grad phi_j
  CsrMatrix weighted_stiffness(std::span<const double> coefficient) const;
  CsrMatrix mass() const;

  // Constant gradient of the P1 interpolant of a nodal vector, per triangle.
  std::vector<Vec2> gradients(std::span<const double> nodal) const;
  std::vector<double> gradient_norms(std::span<const double> nodal) const;

  std::span<const kernels::LocalMatrix> local_stiffness() const { return local_stiffness_; }
  std::span<const kernels::TriangleBasis> basis() const { return basis_; }
  const kernels::GatherPlan& gather_plan() const { return plan_; }
  const CsrMatrix& pattern() const { return pattern_; }

 private:
  CsrMatrix assemble(std::span<const kernels::LocalMatrix> local,
                     std::span<const double> weight) const;

  const Mesh* mesh_;
  Block block_;
  DofMap dofs_;
  CsrMatrix pattern_;
  kernels::GatherPlan plan_;
  std::vector<kernels::TriangleBasis> basis_;
  std::vector<kernels::LocalMatrix> local_stiffness_;
  std::vector<kernels::LocalMatrix> local_mass_;
};

// Local P1 matrices on one triangle (vertex order as given).
kernels::LocalMatrix local_stiffness_matrix(const Point& a, const Point& b, const Point& c);
kernels::LocalMatrix local_mass_matrix(const Point& a, const Point& b, const Point& c);

CsrMatrix assemble_stiffness(const Mesh& mesh, const DensityField& theta, double m,
                             Block block = Block::kInterior);
CsrMatrix assemble_mass(const Mesh& mesh, Block block = Block::kInterior);
std::vector<Vec2> element_gradients(const Mesh& mesh, std::span<const double> nodal);
std::vector<double> gradient_norms(const Mesh& mesh, std::span<const double> nodal);

}  // namespace membrane
