#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fhd/mesh2d.hpp"

using namespace fhd;

TEST_CASE("smallest mesh") {
  const Mesh2D m = build_uniform_square(1);
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_triangles() == 2);
  CHECK(m.num_edges() == 5);
}

TEST_CASE("counts on a 4x4 mesh satisfy Euler's formula") {
  const Mesh2D m = build_uniform_square(4);
  CHECK(m.num_vertices() == 25);
  CHECK(m.num_triangles() == 32);
  CHECK(m.num_edges() == 56);
  CHECK(m.num_vertices() - m.num_edges() + m.num_triangles() == 1);

  int boundary = 0;
  for (int e = 0; e < m.num_edges(); ++e) {
    boundary += m.is_boundary_edge(e);
    CHECK(m.edge_multiplicity(e) == (m.is_boundary_edge(e) ? 1 : 2));
  }
  CHECK(boundary == 16);
}

TEST_CASE("uniform areas, counterclockwise orientation") {
  const Mesh2D m = build_uniform_square(4);
  double total = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    CHECK(m.signed_area(t) == doctest::Approx(1.0 / 32.0).epsilon(1e-14));
    total += m.signed_area(t);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("local edge k is opposite vertex k and carries the orientation sign") {
  const Mesh2D m = build_uniform_square(3);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangle(t);
    for (int k = 0; k < 3; ++k) {
      const EdgeRef& r = m.triangle_edges(t)[k];
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      const auto& e = m.edge(r.edge);
      CHECK(e[0] < e[1]);
      CHECK(((e[0] == a && e[1] == b) || (e[0] == b && e[1] == a)));
      CHECK(r.sign == (a < b ? 1 : -1));
    }
  }
}

TEST_CASE("mesh size") {
  CHECK(mesh_size(build_uniform_square(4)) == doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-14));
  CHECK(mesh_size(build_uniform_square(1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(mesh_size(build_uniform_square(8)) == doctest::Approx(mesh_size(build_uniform_square(4)) / 2.0));
}

TEST_CASE("boundary vertices") {
  const Mesh2D m = build_uniform_square(4);
  int count = 0;
  for (int v = 0; v < m.num_vertices(); ++v) count += m.is_boundary_vertex(v);
  CHECK(count == 16);
}

TEST_CASE("invalid size") {
  CHECK_THROWS_AS(build_uniform_square(0), std::invalid_argument);
  CHECK_THROWS_AS(build_uniform_square(-3), std::invalid_argument);
}
