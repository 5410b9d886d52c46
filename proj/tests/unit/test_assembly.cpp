#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fhd/assembly.hpp"
#include "fhd/verify.hpp"

using namespace fhd;

namespace {

std::shared_ptr<const Mesh2D> square(int n) { return std::make_shared<const Mesh2D>(build_uniform_square(n)); }

Vector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

Vector masked(Vector v, const FESpace& s) {
  for (int i = 0; i < s.n_dofs(); ++i) {
    if (s.is_dirichlet(i)) v[i] = 0.0;
  }
  return v;
}

// Integral of |grad v_h|^2 per element by quadrature, independent of the matrix path.
double broken_energy(const FEField& f) {
  const Mesh2D& mesh = f.space->mesh();
  const QuadratureRule& rule = quadrature(4);
  double s = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      s += rule.weights[q] * geo.det * sample_at(f, t, rule.points[q]).vgrad.squaredNorm();
    }
  }
  return s;
}

}  // namespace

TEST_CASE("P1 stiffness on the reference triangle") {
  auto mesh = std::make_shared<const Mesh2D>(std::vector<Vec2>{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)},
                                             std::vector<std::array<int, 3>>{{0, 1, 2}});
  const SpacePtr p1 = build_space(mesh, ElementFamily::P1);
  const Eigen::MatrixXd k(assemble_stiffness(*p1));
  Eigen::Matrix3d expected;
  expected << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
  CHECK((k - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("P1 stiffness on N=2 has the five-point diagonal at the centre") {
  const SpacePtr p1 = build_space(square(2), ElementFamily::P1);
  REQUIRE(p1->n_free() == 1);
  const SparseMatrix k = assemble_stiffness(*p1);
  int centre = -1;
  for (int i = 0; i < p1->n_dofs(); ++i) {
    if (!p1->is_dirichlet(i)) centre = i;
  }
  CHECK(k.coeff(centre, centre) == doctest::Approx(4.0));
  CHECK(Vector(k * Vector::Ones(p1->n_dofs())).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("weighted stiffness dominates the Laplacian") {
  const MaterialParams p;
  const SpacePtr s = build_space(square(6), ElementFamily::P1);
  const SparseMatrix lap = assemble_stiffness(*s);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const FEField w(s, random_vector(s->n_dofs(), rng));
    const SparseMatrix a = assemble_weighted_stiffness(*s, w, default_alpha_law(p));
    const Vector x = masked(random_vector(s->n_dofs(), rng), *s);
    const double ax = x.dot(a * x);
    const double lx = x.dot(lap * x);
    CHECK(ax >= lx);
    CHECK(ax <= alpha_upper_bound(p) * lx * (1.0 + 1e-14));
  }
}

TEST_CASE("elliptic right-hand side") {
  const SpacePtr s = build_space(square(8), ElementFamily::P1);
  const Vector zero = assemble_elliptic_rhs(*s, [](const Vec2&) { return Vec2(0, 0); });
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);
  const Vector ext = assemble_elliptic_rhs(*s, external_field_flux([](const Vec2&) { return Vec2(0, 0); }, 1.0));
  CHECK(ext.cwiseAbs().maxCoeff() == 0.0);

  // Quadratic potential: the P1 five-point stencil applied to the interpolant
  // reproduces (grad phi, grad tau_i) exactly on interior rows.
  const ScalarFn phi = [](const Vec2& x) { return x.x() * (1 - x.x()) + 2.0 * x.y() * (1 - x.y()); };
  const VectorFn gphi = [](const Vec2& x) { return Vec2(1 - 2 * x.x(), 2.0 * (1 - 2 * x.y())); };
  const Vector rhs = assemble_elliptic_rhs(*s, manufactured_elliptic_flux(gphi, [](double) { return 1.0; }));
  const Vector kphi = assemble_stiffness(*s) * interpolate_nodal(s, phi).coeffs;
  for (int i = 0; i < s->n_dofs(); ++i) {
    if (!s->is_dirichlet(i)) CHECK(rhs[i] == doctest::Approx(kphi[i]).epsilon(1e-12));
  }
}

TEST_CASE("elliptic right-hand side consistency for a quartic potential improves with refinement") {
  const ScalarFn phi = [](const Vec2& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); };
  const VectorFn gphi = [](const Vec2& x) {
    return Vec2((1 - 2 * x.x()) * x.y() * (1 - x.y()), x.x() * (1 - x.x()) * (1 - 2 * x.y()));
  };
  double prev = 0.0;
  for (int n : {4, 8, 16}) {
    const SpacePtr s = build_space(square(n), ElementFamily::P1);
    const Vector rhs = assemble_elliptic_rhs(*s, manufactured_elliptic_flux(gphi, [](double) { return 1.0; }));
    const Vector d = masked(rhs - assemble_stiffness(*s) * interpolate_nodal(s, phi).coeffs, *s);
    const double rel = d.cwiseAbs().maxCoeff() / masked(rhs, *s).cwiseAbs().maxCoeff();
    if (prev > 0.0) CHECK(rel < 0.3 * prev);
    prev = rel;
  }
}

TEST_CASE("edge mass and projections") {
  const SpacePtr u = build_space(square(4), ElementFamily::NE0);
  const SparseMatrix m = assemble_edge_mass(*u);
  CHECK(assemble_edge_rhs(*u, [](const Vec2&) { return Vec2(0, 0); }).cwiseAbs().maxCoeff() == 0.0);

  const FEField c = interpolate_edge(u, [](const Vec2&) { return Vec2(1, 0); });
  const Vector rhs = assemble_edge_rhs(*u, [](const Vec2&) { return Vec2(1, 0); });
  CHECK((m * c.coeffs - rhs).cwiseAbs().maxCoeff() < 1e-14);

  std::mt19937_64 rng(9);
  const FEField v(u, random_vector(u->n_dofs(), rng));
  const Vector b = assemble_edge_rhs(*u, PointVector([&](int t, const Barycentric& l, const Vec2&) {
                                       return sample_at(v, t, l).vvalue;
                                     }));
  const SpdResult r = solve_spd(m, b);
  REQUIRE(r.report.ok());
  CHECK((r.x - v.coeffs).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("Stokes blocks") {
  const double eta = 1.7;
  const auto mesh = square(4);
  const SpacePtr v = build_space(mesh, ElementFamily::CR, 2);
  const SpacePtr w = build_space(mesh, ElementFamily::P0);
  const SaddleSystem sys = assemble_stokes_blocks(*v, *w, eta);
  CHECK(sys.B.rows() == w->n_dofs());
  CHECK(sys.B.cols() == v->n_dofs());
  CHECK(Vector(sys.B * Vector::Zero(v->n_dofs())).cwiseAbs().maxCoeff() == 0.0);
  CHECK(sys.mean_constraint.sum() == doctest::Approx(1.0));

  // div(x, 0) = 1 on every element.
  const FEField lin = interpolate_nodal(v, VectorFn([](const Vec2& x) { return Vec2(x.x(), 0.0); }));
  const Vector bu = sys.B * lin.coeffs;
  CHECK((bu - sys.mean_constraint).cwiseAbs().maxCoeff() < 1e-14);
  std::mt19937_64 rng(4);
  Vector q = random_vector(w->n_dofs(), rng);
  q -= Vector::Constant(q.size(), q.dot(sys.mean_constraint) / sys.mean_constraint.sum());
  CHECK(std::abs(q.dot(bu)) < 1e-13);

  for (int trial = 0; trial < 5; ++trial) {
    const FEField x(v, random_vector(v->n_dofs(), rng));
    CHECK(x.coeffs.dot(sys.A * x.coeffs) == doctest::Approx(eta * broken_energy(x)).epsilon(1e-12));
  }
}

TEST_CASE("Stokes blocks for the second-order pair") {
  const auto mesh = square(3);
  const SpacePtr v = build_space(mesh, ElementFamily::P2, 2);
  const SpacePtr w = build_space(mesh, ElementFamily::P1);
  const SaddleSystem sys = assemble_stokes_blocks(*v, *w, 1.0);
  std::mt19937_64 rng(8);
  const FEField x(v, random_vector(v->n_dofs(), rng));
  CHECK(x.coeffs.dot(sys.A * x.coeffs) == doctest::Approx(broken_energy(x)).epsilon(1e-12));
  CHECK_THROWS_AS(assemble_stokes_blocks(*v, *build_space(mesh, ElementFamily::P0), 1.0), std::invalid_argument);
}

TEST_CASE("convection is skew-symmetric") {
  const auto mesh = square(4);
  for (ElementFamily fam : {ElementFamily::CR, ElementFamily::P2}) {
    const SpacePtr v = build_space(mesh, fam, 2);
    std::mt19937_64 rng(12);
    const FEField w(v, random_vector(v->n_dofs(), rng));
    const SparseMatrix n = assemble_convection(*v, w, 1.3);
    const Vector x = random_vector(v->n_dofs(), rng);
    const Vector y = random_vector(v->n_dofs(), rng);
    const double scale = x.norm() * y.norm();
    CHECK(std::abs(x.dot(n * x)) < 1e-13 * x.squaredNorm());
    CHECK(std::abs(y.dot(n * x) + x.dot(n * y)) < 1e-13 * scale);
    const SparseMatrix sym = n + SparseMatrix(n.transpose());
    CHECK((sym.nonZeros() == 0 || sym.coeffs().cwiseAbs().maxCoeff() < 1e-13));

    const SparseMatrix zero = assemble_convection(*v, FEField(v, Vector::Zero(v->n_dofs())), 1.0);
    CHECK((zero.nonZeros() == 0 || zero.coeffs().cwiseAbs().maxCoeff() == 0.0));
  }
}

TEST_CASE("vector load") {
  const auto mesh = square(4);
  const SpacePtr v = build_space(mesh, ElementFamily::CR, 2);
  CHECK(assemble_vector_load(*v, [](const Vec2&) { return Vec2(0, 0); }).cwiseAbs().maxCoeff() == 0.0);

  // A force inside the space is reproduced by mass times its interpolant.
  const VectorFn f = [](const Vec2& x) { return Vec2(1.0 + x.x(), 2.0 * x.y() - x.x()); };
  const Vector load = assemble_vector_load(*v, f);
  const SpacePtr s = build_space(mesh, ElementFamily::CR);
  const SparseMatrix m = assemble_mass(*s);
  const int n = s->n_dofs();
  const Vector fx = m * interpolate_nodal(s, ScalarFn([&](const Vec2& x) { return f(x).x(); })).coeffs;
  const Vector fy = m * interpolate_nodal(s, ScalarFn([&](const Vec2& x) { return f(x).y(); })).coeffs;
  CHECK((load.head(n) - fx).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((load.tail(n) - fy).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Stokes limit of the manufactured force") {
  MaterialParams params;
  params.rho = 0.0;
  const double pi = std::numbers::pi;
  const VectorFn u = [=](const Vec2& x) { return Vec2(std::sin(pi * x.y()), std::sin(pi * x.x())); };
  const VectorFn f = [=](const Vec2& x) { return Vec2(u(x) * pi * pi * params.eta); };
  // Smooth force: load and mass times interpolant agree up to O(h^2).
  double prev = 0.0;
  for (int n : {4, 8, 16}) {
    const auto mesh = square(n);
    const SpacePtr v = build_space(mesh, ElementFamily::P2, 2);
    const SpacePtr s = build_space(mesh, ElementFamily::P2);
    const Vector load = assemble_vector_load(*v, f);
    const SparseMatrix m = assemble_mass(*s);
    const Vector fx = m * interpolate_nodal(s, ScalarFn([&](const Vec2& x) { return f(x).x(); })).coeffs;
    const double rel = (load.head(s->n_dofs()) - fx).norm() / fx.norm();
    CHECK(rel < 1e-2);
    if (prev > 0.0) CHECK(rel < 0.2 * prev);
    prev = rel;
  }
}

TEST_CASE("discrete residual of the exact solution decreases under refinement") {
  const ManufacturedCase mc = case_2d_l0();
  double prev = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const auto mesh = square(n);
    const SpacePtr v = build_space(mesh, ElementFamily::CR, 2);
    const SpacePtr w = build_space(mesh, ElementFamily::P0);
    const SaddleSystem sys = assemble_stokes_blocks(*v, *w, mc.params.eta);
    const FEField ui = interpolate_nodal(v, mc.u);
    const FEField pi = interpolate_nodal(w, ScalarFn([&](const Vec2& x) { return mc.p_mod(x); }));
    const SparseMatrix conv = assemble_convection(*v, ui, mc.params.rho);
    const Vector load = assemble_vector_load(*v, [&](const Vec2& x) { return mc.body_force(x); });
    const Vector r = masked(sys.A * ui.coeffs + conv * ui.coeffs - sys.B.transpose() * pi.coeffs - load, *v);
    // Dual norm surrogate: r^T A^-1 r on free dofs.
    const DofPartition part = partition_dofs(v->dirichlet_mask());
    const SpdResult z = solve_spd(submatrix(sys.A, part.free, part.free), gather(r, part.free));
    REQUIRE(z.report.ok());
    const double dual = std::sqrt(gather(r, part.free).dot(z.x));
    if (prev > 0.0) CHECK(dual < 0.75 * prev);
    prev = dual;
  }
}
