#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fhd/refelem.hpp"

using namespace fhd;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// int over the reference triangle of x^a y^b = a! b! / (a + b + 2)!
double monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

const std::array<Vec2, 3> kRefVertex{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};

}  // namespace

TEST_CASE("low-degree rules") {
  const QuadratureRule& r1 = quadrature(1);
  REQUIRE(r1.points.size() == 1);
  CHECK(r1.weights[0] == doctest::Approx(0.5));
  CHECK(r1.points[0][0] == doctest::Approx(1.0 / 3.0));

  const QuadratureRule& r2 = quadrature(2);
  REQUIRE(r2.points.size() == 3);
  double x2 = 0.0;
  for (std::size_t q = 0; q < 3; ++q) {
    CHECK(r2.weights[q] == doctest::Approx(1.0 / 6.0));
    const Vec2 p = reference_point(r2.points[q]);
    x2 += r2.weights[q] * p.x() * p.x();
  }
  CHECK(x2 == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("every rule integrates monomials up to its degree") {
  for (int d = 1; d <= 8; ++d) {
    const QuadratureRule& r = quadrature(d);
    CHECK(r.degree >= d);
    double wsum = 0.0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < r.points.size(); ++q) {
          const Vec2 p = reference_point(r.points[q]);
          s += r.weights[q] * std::pow(p.x(), a) * std::pow(p.y(), b);
        }
        CHECK(s == doctest::Approx(monomial_integral(a, b)).epsilon(1e-13));
      }
    }
  }
  CHECK_THROWS_AS(quadrature(0), std::invalid_argument);
  CHECK_THROWS_AS(quadrature(9), std::invalid_argument);
}

TEST_CASE("Gauss line rule") {
  const LineRule& g = gauss_line(5);
  double s = 0.0;
  for (std::size_t i = 0; i < g.points.size(); ++i) s += g.weights[i] * std::pow(g.points[i], 9);
  CHECK(s == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("P1 basis is nodal at vertices") {
  for (int i = 0; i < 3; ++i) {
    Barycentric b{0, 0, 0};
    b[i] = 1.0;
    const ReferenceBasis rb = eval_basis(ElementFamily::P1, b);
    for (int j = 0; j < 3; ++j) CHECK(rb.value[j] == doctest::Approx(i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("P2 basis is nodal at vertices and edge midpoints") {
  for (int i = 0; i < 6; ++i) {
    Barycentric b{0, 0, 0};
    if (i < 3) {
      b[i] = 1.0;
    } else {
      b[(i - 3 + 1) % 3] = 0.5;
      b[(i - 3 + 2) % 3] = 0.5;
    }
    const ReferenceBasis rb = eval_basis(ElementFamily::P2, b);
    for (int j = 0; j < 6; ++j) CHECK(rb.value[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
  }
}

TEST_CASE("CR basis is nodal at edge midpoints") {
  for (int i = 0; i < 3; ++i) {
    Barycentric m{0.5, 0.5, 0.5};
    m[i] = 0.0;
    const ReferenceBasis rb = eval_basis(ElementFamily::CR, m);
    for (int j = 0; j < 3; ++j) CHECK(rb.value[j] == doctest::Approx(i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("NE0 tangential moments are Kronecker deltas") {
  const LineRule& g = gauss_line(2);
  for (int k = 0; k < 3; ++k) {
    const int a = (k + 1) % 3;
    const int b = (k + 2) % 3;
    const Vec2 t = kRefVertex[b] - kRefVertex[a];
    std::array<double, 3> moment{};
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      Barycentric lam{0, 0, 0};
      lam[a] = 1.0 - g.points[q];
      lam[b] = g.points[q];
      const ReferenceBasis rb = eval_basis(ElementFamily::NE0, lam);
      for (int l = 0; l < 3; ++l) moment[l] += g.weights[q] * rb.vvalue[l].dot(t);
    }
    for (int l = 0; l < 3; ++l) CHECK(moment[l] == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-14));
  }
}

TEST_CASE("NE0 curl is constant and equals 2 on the reference triangle") {
  const ReferenceBasis rb = eval_basis(ElementFamily::NE0, {0.2, 0.3, 0.5});
  for (int l = 0; l < 3; ++l) CHECK(std::abs(rb.curl[l]) == doctest::Approx(2.0));
}

TEST_CASE("family metadata") {
  CHECK(family_info(ElementFamily::P2).local_dofs == 6);
  CHECK(family_info(ElementFamily::NE1).local_dofs == 6);
  CHECK(family_info(ElementFamily::NE1).edge_element);
  CHECK_FALSE(family_info(ElementFamily::CR).edge_element);
  CHECK(family_name(ElementFamily::NE0) == "NE0");
}
