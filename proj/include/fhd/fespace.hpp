#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fhd/mesh2d.hpp"
#include "fhd/refelem.hpp"

namespace fhd {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ScalarFn = std::function<double(const Vec2&)>;
using VectorFn = std::function<Vec2(const Vec2&)>;

/// Global dof layout of one element family on one mesh.
///
/// Vector spaces are component-major: all x-dofs, then all y-dofs. Edge
/// families carry a sign per (triangle, local dof) so that the global basis
/// function is sign * (mapped reference basis function).
class FESpace {
 public:
  FESpace(std::shared_ptr<const Mesh2D> mesh, ElementFamily family, int components = 1);

  const Mesh2D& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh2D>& mesh_ptr() const { return mesh_; }
  ElementFamily family() const { return family_; }
  int components() const { return components_; }
  int local_dofs() const { return local_dofs_; }
  int n_scalar_dofs() const { return n_scalar_; }
  int n_dofs() const { return n_scalar_ * components_; }
  int n_free() const { return n_free_; }
  int component_offset(int c) const { return c * n_scalar_; }

  /// Global (component 0) dofs of triangle t in local order.
  std::span<const int> cell_dofs(int t) const {
    return {dofs_.data() + static_cast<std::size_t>(t) * local_dofs_,
            static_cast<std::size_t>(local_dofs_)};
  }
  std::span<const double> cell_signs(int t) const {
    return {signs_.data() + static_cast<std::size_t>(t) * local_dofs_,
            static_cast<std::size_t>(local_dofs_)};
  }

  bool is_dirichlet(int dof) const { return dirichlet_[dof] != 0; }
  const std::vector<char>& dirichlet_mask() const { return dirichlet_; }

  /// Lagrange node of a scalar dof (vertex, edge midpoint or centroid).
  /// Throws std::logic_error for edge families.
  Vec2 node(int scalar_dof) const;

 private:
  std::shared_ptr<const Mesh2D> mesh_;
  ElementFamily family_;
  int components_;
  int local_dofs_;
  int n_scalar_ = 0;
  int n_free_ = 0;
  std::vector<int> dofs_;
  std::vector<double> signs_;
  std::vector<char> dirichlet_;
};

using SpacePtr = std::shared_ptr<const FESpace>;

/// Throws std::invalid_argument for components outside {1, 2} or for vector
/// valued edge families with components != 1.
SpacePtr build_space(std::shared_ptr<const Mesh2D> mesh, ElementFamily family, int components = 1);

/// Coefficient vector attached to a space.
struct FEField {
  SpacePtr space;
  Vector coeffs;

  FEField() = default;
  explicit FEField(SpacePtr s);
  FEField(SpacePtr s, Vector c);
};

/// Basis functions of one triangle mapped to physical coordinates, signs
/// applied. Only component 0 for vector Lagrange spaces.
struct PhysicalBasis {
  std::array<double, kMaxLocalDofs> value{};
  std::array<Vec2, kMaxLocalDofs> grad{};
  std::array<Vec2, kMaxLocalDofs> vvalue{};
  std::array<double, kMaxLocalDofs> curl{};
  int n = 0;
};

void map_basis(const FESpace& space, int t, const ElementGeometry& geo, const ReferenceBasis& ref,
               PhysicalBasis& out);

/// Value of a discrete field at one point of one triangle.
struct FieldSample {
  double value = 0;       // scalar Lagrange
  Vec2 grad = Vec2::Zero();  // scalar Lagrange
  Vec2 vvalue = Vec2::Zero();  // vector Lagrange or edge
  Mat2 vgrad = Mat2::Zero();   // vector Lagrange, row c = grad of component c
  double curl = 0;             // edge
};

FieldSample sample(const FEField& field, int t, const ElementGeometry& geo, const ReferenceBasis& ref);
FieldSample sample_at(const FEField& field, int t, const Barycentric& point);

/// Lagrange/CR/P0 interpolation by point values at the nodes. When
/// `zero_dirichlet` is set, Dirichlet entries are forced to 0.
FEField interpolate_nodal(const SpacePtr& space, const ScalarFn& f, bool zero_dirichlet = false);
FEField interpolate_nodal(const SpacePtr& space, const VectorFn& f, bool zero_dirichlet = false);

/// Edge interpolation: tangential moments against Legendre polynomials on
/// each globally oriented edge, 5-point Gauss per edge.
FEField interpolate_edge(const SpacePtr& space, const VectorFn& v);

/// Inclusion grad S_h -> U_h: coefficients of grad(phi_h) in the edge space
/// are G * (coefficients of phi_h). Pairs P1 -> NE0 and P2 -> NE1.
SparseMatrix gradient_matrix(const FESpace& scalar_space, const FESpace& edge_space);

/// Split of dofs into free and constrained sets.
struct DofPartition {
  std::vector<int> free;
  std::vector<int> fixed;
  std::vector<int> position;  // index within `free` or `fixed`
};
DofPartition partition_dofs(const std::vector<char>& dirichlet_mask);
DofPartition partition_all_free(int n);

}  // namespace fhd
