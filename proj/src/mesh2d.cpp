#include "fhd/mesh2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace fhd {

Mesh2D::Mesh2D(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const auto nv = static_cast<std::int64_t>(vertices_.size());
  std::unordered_map<std::int64_t, int> lookup;
  lookup.reserve(triangles_.size() * 2);
  tri_edges_.resize(triangles_.size());

  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv) {
        throw std::invalid_argument("Mesh2D: triangle " + std::to_string(t) +
                                    " references a missing vertex");
      }
    }
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      const int lo = std::min(a, b);
      const int hi = std::max(a, b);
      const std::int64_t key = static_cast<std::int64_t>(lo) * nv + hi;
      auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back({lo, hi});
        edge_count_.push_back(0);
      }
      ++edge_count_[it->second];
      tri_edges_[t][k] = EdgeRef{it->second, a < b ? 1 : -1};
    }
  }

  boundary_vertex_.assign(vertices_.size(), 0);
  boundary_edge_.assign(edges_.size(), 0);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edge_count_[e] == 1) {
      boundary_edge_[e] = 1;
      boundary_vertex_[edges_[e][0]] = 1;
      boundary_vertex_[edges_[e][1]] = 1;
    }
  }
}

double Mesh2D::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Vec2 a = vertices_[tri[1]] - vertices_[tri[0]];
  const Vec2 b = vertices_[tri[2]] - vertices_[tri[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double Mesh2D::diameter(int t) const {
  const auto& tri = triangles_[t];
  double d = 0.0;
  for (int k = 0; k < 3; ++k) {
    d = std::max(d, (vertices_[tri[(k + 1) % 3]] - vertices_[tri[(k + 2) % 3]]).norm());
  }
  return d;
}

Vec2 Mesh2D::edge_midpoint(int e) const {
  return 0.5 * (vertices_[edges_[e][0]] + vertices_[edges_[e][1]]);
}

Mesh2D build_uniform_square(int n) {
  if (n < 1) {
    throw std::invalid_argument("build_uniform_square: N must be >= 1, got " + std::to_string(n));
  }
  const int stride = n + 1;
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(stride) * stride);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * stride + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + stride;
      const int v11 = v01 + 1;
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }
  return Mesh2D(std::move(vertices), std::move(triangles));
}

double mesh_size(const Mesh2D& mesh) {
  double h = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) h = std::max(h, mesh.diameter(t));
  return h;
}

}  // namespace fhd
