#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "fhd/mesh2d.hpp"

namespace fhd {

enum class ElementFamily { P0, P1, P2, CR, NE0, NE1 };

enum class DofCarrier { Vertex, Edge, Cell };

struct FamilyInfo {
  int local_dofs;
  bool edge_element;  // H(curl) family: vector valued, covariant mapping
  int degree;         // polynomial degree of the local basis
};

FamilyInfo family_info(ElementFamily family);
std::string_view family_name(ElementFamily family);

/// Geometric carrier of local dof `local` and the local vertex/edge index it
/// sits on (0 for the cell).
struct LocalDofPlacement {
  DofCarrier carrier;
  int index;
  int slot;  // position among the dofs sharing the carrier
};
LocalDofPlacement local_dof_placement(ElementFamily family, int local);

inline constexpr int kMaxLocalDofs = 6;

using Barycentric = std::array<double, 3>;

/// Reference triangle (0,0), (1,0), (0,1); a point with barycentric
/// coordinates (l0, l1, l2) sits at (l1, l2).
inline Vec2 reference_point(const Barycentric& b) { return {b[1], b[2]}; }

struct QuadratureRule {
  std::vector<Barycentric> points;
  std::vector<double> weights;  // sum to 1/2, the reference area
  int degree = 0;
};

/// Smallest stocked symmetric rule exact for polynomials of the given degree.
/// Throws std::invalid_argument outside [1, 8].
const QuadratureRule& quadrature(int degree);

/// Gauss-Legendre points and weights on [0, 1].
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
const LineRule& gauss_line(int n_points);

/// Basis values on the reference triangle. Scalar families fill `value` and
/// `grad`; edge families fill `vvalue` and `curl`.
struct ReferenceBasis {
  std::array<double, kMaxLocalDofs> value{};
  std::array<Vec2, kMaxLocalDofs> grad{};
  std::array<Vec2, kMaxLocalDofs> vvalue{};
  std::array<double, kMaxLocalDofs> curl{};
  int n = 0;
};

ReferenceBasis eval_basis(ElementFamily family, const Barycentric& point);

/// Reference basis tabulated at every point of a quadrature rule.
struct BasisTable {
  ElementFamily family;
  const QuadratureRule* rule;
  std::vector<ReferenceBasis> at;
};

const BasisTable& tabulate(ElementFamily family, int quad_degree);

/// Affine map from the reference triangle onto a mesh triangle.
struct ElementGeometry {
  std::array<Vec2, 3> v;
  Mat2 jac;        // columns v1 - v0, v2 - v0
  Mat2 jac_inv_t;  // J^{-T}
  double det = 0;  // 2 * signed area

  ElementGeometry(const Mesh2D& mesh, int t);

  Vec2 map(const Barycentric& b) const { return b[0] * v[0] + b[1] * v[1] + b[2] * v[2]; }
  double area() const { return 0.5 * det; }
};

}  // namespace fhd
