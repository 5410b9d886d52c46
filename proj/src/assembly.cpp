#include "fhd/assembly.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fhd {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

int clamp_degree(int d) { return std::clamp(d, 1, 8); }

std::vector<int> traversal(const Mesh2D& mesh, const AssemblyOptions& opts) {
  if (opts.element_order.empty()) {
    std::vector<int> order(static_cast<std::size_t>(mesh.num_triangles()));
    std::iota(order.begin(), order.end(), 0);
    return order;
  }
  if (static_cast<int>(opts.element_order.size()) != mesh.num_triangles()) {
    throw std::invalid_argument("AssemblyOptions: element_order must list every triangle once");
  }
  return opts.element_order;
}

SparseMatrix finish(Eigen::Index rows, Eigen::Index cols, const Triplets& trip) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

void require_scalar_lagrange(const FESpace& space, const char* who) {
  if (family_info(space.family()).edge_element || space.components() != 1) {
    throw std::invalid_argument(std::string(who) + ": scalar Lagrange space required");
  }
}

void require_edge(const FESpace& space, const char* who) {
  if (!family_info(space.family()).edge_element) {
    throw std::invalid_argument(std::string(who) + ": edge element space required");
  }
}

void require_same_mesh(const FESpace& a, const FESpace& b, const char* who) {
  if (&a.mesh() != &b.mesh()) throw std::invalid_argument(std::string(who) + ": spaces live on different meshes");
}

}  // namespace

SparseMatrix assemble_weighted_stiffness(const FESpace& space, const PointScalar& weight,
                                         const AssemblyOptions& opts) {
  require_scalar_lagrange(space, "assemble_weighted_stiffness");
  const int k = family_info(space.family()).degree;
  const BasisTable& table = tabulate(space.family(), clamp_degree(2 * (k - 1) + opts.quad_bump));
  const QuadratureRule& rule = *table.rule;
  const Mesh2D& mesh = space.mesh();
  const int n = space.local_dofs();
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_triangles()) * n * n);
  PhysicalBasis pb;
  Eigen::Matrix<double, kMaxLocalDofs, kMaxLocalDofs> local;
  for (int t : traversal(mesh, opts)) {
    const ElementGeometry geo(mesh, t);
    local.setZero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      map_basis(space, t, geo, table.at[q], pb);
      const double w = rule.weights[q] * geo.det * weight(t, rule.points[q], geo.map(rule.points[q]));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) local(i, j) += w * pb.grad[i].dot(pb.grad[j]);
      }
    }
    const auto dofs = space.cell_dofs(t);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) trip.emplace_back(dofs[i], dofs[j], local(i, j));
    }
  }
  return finish(space.n_dofs(), space.n_dofs(), trip);
}

SparseMatrix assemble_stiffness(const FESpace& space, const AssemblyOptions& opts) {
  return assemble_weighted_stiffness(
      space, [](int, const Barycentric&, const Vec2&) { return 1.0; }, opts);
}

SparseMatrix assemble_weighted_stiffness(const FESpace& space, const FEField& w, const AlphaLaw& law,
                                         const AssemblyOptions& opts) {
  if (!w.space || &w.space->mesh() != &space.mesh() || w.space->family() != space.family()) {
    throw std::invalid_argument("assemble_weighted_stiffness: coefficient field must live on the same space");
  }
  return assemble_weighted_stiffness(
      space,
      [&](int t, const Barycentric& b, const Vec2&) { return law(sample_at(w, t, b).grad.norm()); },
      opts);
}

SparseMatrix assemble_weighted_stiffness(const FESpace& space, const VectorFn& grad_w, const AlphaLaw& law,
                                         const AssemblyOptions& opts) {
  return assemble_weighted_stiffness(
      space, [&](int, const Barycentric&, const Vec2& x) { return law(grad_w(x).norm()); }, opts);
}

Vector assemble_elliptic_rhs(const FESpace& space, const VectorFn& flux, const AssemblyOptions& opts) {
  require_scalar_lagrange(space, "assemble_elliptic_rhs");
  const int k = family_info(space.family()).degree;
  const BasisTable& table = tabulate(space.family(), clamp_degree(k + 1 + opts.quad_bump));
  const QuadratureRule& rule = *table.rule;
  const Mesh2D& mesh = space.mesh();
  Vector rhs = Vector::Zero(space.n_dofs());
  PhysicalBasis pb;
  for (int t : traversal(mesh, opts)) {
    const ElementGeometry geo(mesh, t);
    const auto dofs = space.cell_dofs(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      map_basis(space, t, geo, table.at[q], pb);
      const Vec2 f = flux(geo.map(rule.points[q]));
      const double w = rule.weights[q] * geo.det;
      for (int i = 0; i < pb.n; ++i) rhs[dofs[i]] += w * f.dot(pb.grad[i]);
    }
  }
  return rhs;
}

VectorFn manufactured_elliptic_flux(VectorFn grad_phi, AlphaLaw law) {
  return [g = std::move(grad_phi), law = std::move(law)](const Vec2& x) -> Vec2 {
    const Vec2 d = g(x);
    return law(d.norm()) * d;
  };
}

VectorFn external_field_flux(VectorFn external_field, double mu0) {
  return [h = std::move(external_field), mu0](const Vec2& x) -> Vec2 { return h(x) / mu0; };
}

SparseMatrix assemble_mass(const FESpace& space, const AssemblyOptions& opts) {
  require_scalar_lagrange(space, "assemble_mass");
  const int k = family_info(space.family()).degree;
  const BasisTable& table = tabulate(space.family(), clamp_degree(2 * k));
  const QuadratureRule& rule = *table.rule;
  const Mesh2D& mesh = space.mesh();
  const int n = space.local_dofs();
  Triplets trip;
  for (int t : traversal(mesh, opts)) {
    const ElementGeometry geo(mesh, t);
    const auto dofs = space.cell_dofs(t);
    Eigen::Matrix<double, kMaxLocalDofs, kMaxLocalDofs> local = decltype(local)::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * geo.det;
      const auto& b = table.at[q];
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) local(i, j) += w * b.value[i] * b.value[j];
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) trip.emplace_back(dofs[i], dofs[j], local(i, j));
    }
  }
  return finish(space.n_dofs(), space.n_dofs(), trip);
}

Vector assemble_load(const FESpace& space, const PointScalar& f, int quad_degree) {
  require_scalar_lagrange(space, "assemble_load");
  const BasisTable& table = tabulate(space.family(), clamp_degree(quad_degree));
  const QuadratureRule& rule = *table.rule;
  const Mesh2D& mesh = space.mesh();
  Vector rhs = Vector::Zero(space.n_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    const auto dofs = space.cell_dofs(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * geo.det * f(t, rule.points[q], geo.map(rule.points[q]));
      for (int i = 0; i < space.local_dofs(); ++i) rhs[dofs[i]] += w * table.at[q].value[i];
    }
  }
  return rhs;
}

SparseMatrix assemble_edge_mass(const FESpace& space, const AssemblyOptions& opts) {
  require_edge(space, "assemble_edge_mass");
  const BasisTable& table = tabulate(space.family(), 2);
  const QuadratureRule& rule = *table.rule;
  const Mesh2D& mesh = space.mesh();
  const int n = space.local_dofs();
  Triplets trip;
  PhysicalBasis pb;
  for (int t : traversal(mesh, opts)) {
    const ElementGeometry geo(mesh, t);
    Eigen::Matrix<double, kMaxLocalDofs, kMaxLocalDofs> local = decltype(local)::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      map_basis(space, t, geo, table.at[q], pb);
      const double w = rule.weights[q] * geo.det;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) local(i, j) += w * pb.vvalue[i].dot(pb.vvalue[j]);
      }
    }
    const auto dofs = space.cell_dofs(t);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) trip.emplace_back(dofs[i], dofs[j], local(i, j));
    }
  }
  return finish(space.n_dofs(), space.n_dofs(), trip);
}

Vector assemble_edge_rhs(const FESpace& space, const PointVector& v, const AssemblyOptions& opts) {
  require_edge(space, "assemble_edge_rhs");
  const int base = space.family() == ElementFamily::NE0 ? 2 : 4;
  const BasisTable& table = tabulate(space.family(), clamp_degree(base + opts.quad_bump));
  const QuadratureRule& rule = *table.rule;
  const Mesh2D& mesh = space.mesh();
  Vector rhs = Vector::Zero(space.n_dofs());
  PhysicalBasis pb;
  for (int t : traversal(mesh, opts)) {
    const ElementGeometry geo(mesh, t);
    const auto dofs = space.cell_dofs(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      map_basis(space, t, geo, table.at[q], pb);
      const Vec2 f = v(t, rule.points[q], geo.map(rule.points[q]));
      const double w = rule.weights[q] * geo.det;
      for (int i = 0; i < pb.n; ++i) rhs[dofs[i]] += w * f.dot(pb.vvalue[i]);
    }
  }
  return rhs;
}

Vector assemble_edge_rhs(const FESpace& space, const VectorFn& v, const AssemblyOptions& opts) {
  return assemble_edge_rhs(space, [&](int, const Barycentric&, const Vec2& x) { return v(x); }, opts);
}

SaddleSystem assemble_stokes_blocks(const FESpace& velocity, const FESpace& pressure, double eta,
                                    const AssemblyOptions& opts) {
  const bool cr_p0 = velocity.family() == ElementFamily::CR && pressure.family() == ElementFamily::P0;
  const bool taylor_hood = velocity.family() == ElementFamily::P2 && pressure.family() == ElementFamily::P1;
  if (!(cr_p0 || taylor_hood) || velocity.components() != 2 || pressure.components() != 1) {
    throw std::invalid_argument("assemble_stokes_blocks: supported pairs are (CR^2, P0) and (P2^2, P1)");
  }
  require_same_mesh(velocity, pressure, "assemble_stokes_blocks");
  const Mesh2D& mesh = velocity.mesh();
  const int k = family_info(velocity.family()).degree;
  const BasisTable& vtab = tabulate(velocity.family(), clamp_degree(2 * k));
  const BasisTable& ptab = tabulate(pressure.family(), clamp_degree(2 * k));
  const QuadratureRule& rule = *vtab.rule;
  const int nv = velocity.local_dofs();
  const int np = pressure.local_dofs();
  const int off = velocity.component_offset(1);

  Triplets ta;
  Triplets tb;
  Vector mean = Vector::Zero(pressure.n_dofs());
  PhysicalBasis pb;
  for (int t : traversal(mesh, opts)) {
    const ElementGeometry geo(mesh, t);
    const auto vd = velocity.cell_dofs(t);
    const auto pd = pressure.cell_dofs(t);
    Eigen::Matrix<double, kMaxLocalDofs, kMaxLocalDofs> visc = decltype(visc)::Zero();
    Eigen::Matrix<double, kMaxLocalDofs, 2 * kMaxLocalDofs> div = decltype(div)::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      map_basis(velocity, t, geo, vtab.at[q], pb);
      const auto& pv = ptab.at[q].value;
      const double w = rule.weights[q] * geo.det;
      for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j) visc(i, j) += w * eta * pb.grad[i].dot(pb.grad[j]);
      }
      for (int a = 0; a < np; ++a) {
        mean[pd[a]] += w * pv[a];
        for (int i = 0; i < nv; ++i) {
          div(a, i) += w * pv[a] * pb.grad[i].x();
          div(a, nv + i) += w * pv[a] * pb.grad[i].y();
        }
      }
    }
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j) ta.emplace_back(c * off + vd[i], c * off + vd[j], visc(i, j));
      }
    }
    for (int a = 0; a < np; ++a) {
      for (int i = 0; i < nv; ++i) {
        tb.emplace_back(pd[a], vd[i], div(a, i));
        tb.emplace_back(pd[a], off + vd[i], div(a, nv + i));
      }
    }
  }
  SaddleSystem sys;
  sys.A = finish(velocity.n_dofs(), velocity.n_dofs(), ta);
  sys.B = finish(pressure.n_dofs(), velocity.n_dofs(), tb);
  sys.rhs_u = Vector::Zero(velocity.n_dofs());
  sys.rhs_p = Vector::Zero(pressure.n_dofs());
  sys.mean_constraint = mean;
  return sys;
}

SparseMatrix assemble_convection(const FESpace& velocity, const FEField& w, double rho,
                                 const AssemblyOptions& opts) {
  if (velocity.components() != 2 || family_info(velocity.family()).edge_element) {
    throw std::invalid_argument("assemble_convection: vector Lagrange velocity space required");
  }
  if (!w.space || w.space.get() != &velocity) {
    if (!w.space || &w.space->mesh() != &velocity.mesh() || w.space->family() != velocity.family() ||
        w.space->components() != 2) {
      throw std::invalid_argument("assemble_convection: convecting field must live on the velocity space");
    }
  }
  const int k = family_info(velocity.family()).degree;
  const BasisTable& table = tabulate(velocity.family(), clamp_degree(3 * k - 1 + opts.quad_bump));
  const QuadratureRule& rule = *table.rule;
  const Mesh2D& mesh = velocity.mesh();
  const int n = velocity.local_dofs();
  const int off = velocity.component_offset(1);
  Triplets trip;
  PhysicalBasis pb;
  for (int t : traversal(mesh, opts)) {
    const ElementGeometry geo(mesh, t);
    const auto dofs = velocity.cell_dofs(t);
    // conv(i, j) = int (w . grad phi_j) phi_i
    Eigen::Matrix<double, kMaxLocalDofs, kMaxLocalDofs> conv = decltype(conv)::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      map_basis(velocity, t, geo, table.at[q], pb);
      Vec2 wq = Vec2::Zero();
      for (int i = 0; i < n; ++i) {
        wq.x() += w.coeffs[dofs[i]] * pb.value[i];
        wq.y() += w.coeffs[off + dofs[i]] * pb.value[i];
      }
      const double qw = rule.weights[q] * geo.det;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) conv(i, j) += qw * wq.dot(pb.grad[j]) * pb.value[i];
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = 0.5 * rho * (conv(i, j) - conv(j, i));
        if (v == 0.0) continue;
        for (int c = 0; c < 2; ++c) trip.emplace_back(c * off + dofs[i], c * off + dofs[j], v);
      }
    }
  }
  return finish(velocity.n_dofs(), velocity.n_dofs(), trip);
}

Vector assemble_vector_load(const FESpace& velocity, const VectorFn& f, const AssemblyOptions& opts) {
  if (velocity.components() != 2) {
    throw std::invalid_argument("assemble_vector_load: two-component space required");
  }
  const int k = family_info(velocity.family()).degree;
  const BasisTable& table = tabulate(velocity.family(), clamp_degree(k + 2 + opts.quad_bump));
  const QuadratureRule& rule = *table.rule;
  const Mesh2D& mesh = velocity.mesh();
  const int off = velocity.component_offset(1);
  Vector rhs = Vector::Zero(velocity.n_dofs());
  for (int t : traversal(mesh, opts)) {
    const ElementGeometry geo(mesh, t);
    const auto dofs = velocity.cell_dofs(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 fv = f(geo.map(rule.points[q]));
      const double w = rule.weights[q] * geo.det;
      for (int i = 0; i < velocity.local_dofs(); ++i) {
        const double phi = table.at[q].value[i];
        rhs[dofs[i]] += w * fv.x() * phi;
        rhs[off + dofs[i]] += w * fv.y() * phi;
      }
    }
  }
  return rhs;
}

}  // namespace fhd
