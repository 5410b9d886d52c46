#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

namespace fhd {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Edge of a triangle seen from the triangle: global edge index and the
/// sign of the local traversal relative to the global low->high orientation.
struct EdgeRef {
  int edge = -1;
  int sign = 0;
};

/// Conforming triangulation of the unit square.
///
/// Local conventions: triangle vertices are counterclockwise and local edge k
/// is the one opposite local vertex k, traversed from vertex (k+1)%3 to
/// vertex (k+2)%3. Global edges are oriented from the lower to the higher
/// vertex index.
class Mesh2D {
 public:
  Mesh2D(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const Vec2& vertex(int i) const { return vertices_[i]; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  const std::array<EdgeRef, 3>& triangle_edges(int t) const { return tri_edges_[t]; }

  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  bool is_boundary_edge(int e) const { return boundary_edge_[e] != 0; }
  /// Number of triangles sharing edge e (1 on the boundary, 2 inside).
  int edge_multiplicity(int e) const { return edge_count_[e]; }

  double signed_area(int t) const;
  double diameter(int t) const;
  Vec2 edge_midpoint(int e) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<EdgeRef, 3>> tri_edges_;
  std::vector<char> boundary_vertex_;
  std::vector<char> boundary_edge_;
  std::vector<int> edge_count_;
};

/// N x N uniform mesh of (0,1)^2, every cell cut by its lower-left to
/// upper-right diagonal. Throws std::invalid_argument for n < 1.
Mesh2D build_uniform_square(int n);

/// Largest triangle diameter.
double mesh_size(const Mesh2D& mesh);

}  // namespace fhd
