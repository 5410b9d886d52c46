#include "fhd/fespace.hpp"

#include <stdexcept>
#include <string>

namespace fhd {

FESpace::FESpace(std::shared_ptr<const Mesh2D> mesh, ElementFamily family, int components)
    : mesh_(std::move(mesh)),
      family_(family),
      components_(components),
      local_dofs_(family_info(family).local_dofs) {
  if (!mesh_) throw std::invalid_argument("FESpace: null mesh");
  if (components < 1 || components > 2) {
    throw std::invalid_argument("FESpace: components must be 1 or 2, got " + std::to_string(components));
  }
  if (family_info(family).edge_element && components != 1) {
    throw std::invalid_argument("FESpace: edge families are already vector valued");
  }
  const Mesh2D& m = *mesh_;
  const int nv = m.num_vertices();
  const int ne = m.num_edges();
  const int nt = m.num_triangles();
  switch (family_) {
    case ElementFamily::P0: n_scalar_ = nt; break;
    case ElementFamily::P1: n_scalar_ = nv; break;
    case ElementFamily::P2: n_scalar_ = nv + ne; break;
    case ElementFamily::CR:
    case ElementFamily::NE0: n_scalar_ = ne; break;
    case ElementFamily::NE1: n_scalar_ = 2 * ne; break;
  }

  dofs_.resize(static_cast<std::size_t>(nt) * local_dofs_);
  signs_.assign(dofs_.size(), 1.0);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = m.triangle(t);
    const auto& te = m.triangle_edges(t);
    int* d = dofs_.data() + static_cast<std::size_t>(t) * local_dofs_;
    double* s = signs_.data() + static_cast<std::size_t>(t) * local_dofs_;
    for (int i = 0; i < local_dofs_; ++i) {
      const auto place = local_dof_placement(family_, i);
      switch (place.carrier) {
        case DofCarrier::Cell: d[i] = t; break;
        case DofCarrier::Vertex: d[i] = tri[place.index]; break;
        case DofCarrier::Edge: {
          const EdgeRef& er = te[place.index];
          if (family_ == ElementFamily::P2) {
            d[i] = nv + er.edge;
          } else if (family_ == ElementFamily::NE1) {
            d[i] = 2 * er.edge + place.slot;
            // Odd Legendre moment is invariant under edge reversal.
            s[i] = place.slot == 0 ? er.sign : 1.0;
          } else {
            d[i] = er.edge;
            if (family_ == ElementFamily::NE0) s[i] = er.sign;
          }
          break;
        }
      }
    }
  }

  dirichlet_.assign(static_cast<std::size_t>(n_scalar_) * components_, 0);
  std::vector<char> scalar_mask(n_scalar_, 0);
  switch (family_) {
    case ElementFamily::P0: break;
    case ElementFamily::P1:
      for (int v = 0; v < nv; ++v) scalar_mask[v] = m.is_boundary_vertex(v);
      break;
    case ElementFamily::P2:
      for (int v = 0; v < nv; ++v) scalar_mask[v] = m.is_boundary_vertex(v);
      for (int e = 0; e < ne; ++e) scalar_mask[nv + e] = m.is_boundary_edge(e);
      break;
    case ElementFamily::CR:
    case ElementFamily::NE0:
      for (int e = 0; e < ne; ++e) scalar_mask[e] = m.is_boundary_edge(e);
      break;
    case ElementFamily::NE1:
      for (int e = 0; e < ne; ++e) scalar_mask[2 * e] = scalar_mask[2 * e + 1] = m.is_boundary_edge(e);
      break;
  }
  int fixed = 0;
  for (int c = 0; c < components_; ++c) {
    for (int i = 0; i < n_scalar_; ++i) {
      dirichlet_[static_cast<std::size_t>(c) * n_scalar_ + i] = scalar_mask[i];
      fixed += scalar_mask[i];
    }
  }
  n_free_ = n_dofs() - fixed;
}

Vec2 FESpace::node(int i) const {
  const Mesh2D& m = *mesh_;
  switch (family_) {
    case ElementFamily::P0: {
      const auto& tri = m.triangle(i);
      return (m.vertex(tri[0]) + m.vertex(tri[1]) + m.vertex(tri[2])) / 3.0;
    }
    case ElementFamily::P1: return m.vertex(i);
    case ElementFamily::P2:
      return i < m.num_vertices() ? m.vertex(i) : m.edge_midpoint(i - m.num_vertices());
    case ElementFamily::CR: return m.edge_midpoint(i);
    case ElementFamily::NE0:
    case ElementFamily::NE1: break;
  }
  throw std::logic_error("FESpace::node: edge families have no nodal points");
}

SpacePtr build_space(std::shared_ptr<const Mesh2D> mesh, ElementFamily family, int components) {
  return std::make_shared<const FESpace>(std::move(mesh), family, components);
}

FEField::FEField(SpacePtr s) : space(std::move(s)), coeffs(Vector::Zero(space->n_dofs())) {}

FEField::FEField(SpacePtr s, Vector c) : space(std::move(s)), coeffs(std::move(c)) {
  if (coeffs.size() != space->n_dofs()) {
    throw std::invalid_argument("FEField: coefficient length " + std::to_string(coeffs.size()) +
                                " does not match space size " + std::to_string(space->n_dofs()));
  }
}

void map_basis(const FESpace& space, int t, const ElementGeometry& geo, const ReferenceBasis& ref,
               PhysicalBasis& out) {
  const auto signs = space.cell_signs(t);
  out.n = ref.n;
  if (family_info(space.family()).edge_element) {
    const double inv_det = 1.0 / geo.det;
    for (int i = 0; i < ref.n; ++i) {
      out.vvalue[i] = signs[i] * (geo.jac_inv_t * ref.vvalue[i]);
      out.curl[i] = signs[i] * ref.curl[i] * inv_det;
    }
  } else {
    for (int i = 0; i < ref.n; ++i) {
      out.value[i] = ref.value[i];
      out.grad[i] = geo.jac_inv_t * ref.grad[i];
    }
  }
}

FieldSample sample(const FEField& field, int t, const ElementGeometry& geo, const ReferenceBasis& ref) {
  const FESpace& space = *field.space;
  PhysicalBasis pb;
  map_basis(space, t, geo, ref, pb);
  const auto dofs = space.cell_dofs(t);
  FieldSample s;
  if (family_info(space.family()).edge_element) {
    for (int i = 0; i < pb.n; ++i) {
      const double c = field.coeffs[dofs[i]];
      s.vvalue += c * pb.vvalue[i];
      s.curl += c * pb.curl[i];
    }
  } else if (space.components() == 1) {
    for (int i = 0; i < pb.n; ++i) {
      const double c = field.coeffs[dofs[i]];
      s.value += c * pb.value[i];
      s.grad += c * pb.grad[i];
    }
  } else {
    for (int comp = 0; comp < 2; ++comp) {
      const int off = space.component_offset(comp);
      for (int i = 0; i < pb.n; ++i) {
        const double c = field.coeffs[off + dofs[i]];
        s.vvalue[comp] += c * pb.value[i];
        s.vgrad.row(comp) += c * pb.grad[i].transpose();
      }
    }
    s.value = s.vvalue.x();
  }
  return s;
}

FieldSample sample_at(const FEField& field, int t, const Barycentric& point) {
  const ElementGeometry geo(field.space->mesh(), t);
  return sample(field, t, geo, eval_basis(field.space->family(), point));
}

FEField interpolate_nodal(const SpacePtr& space, const ScalarFn& f, bool zero_dirichlet) {
  if (space->components() != 1 || family_info(space->family()).edge_element) {
    throw std::invalid_argument("interpolate_nodal: scalar Lagrange/CR/P0 space required");
  }
  FEField out(space);
  for (int i = 0; i < space->n_scalar_dofs(); ++i) {
    out.coeffs[i] = (zero_dirichlet && space->is_dirichlet(i)) ? 0.0 : f(space->node(i));
  }
  return out;
}

FEField interpolate_nodal(const SpacePtr& space, const VectorFn& f, bool zero_dirichlet) {
  if (space->components() != 2) {
    throw std::invalid_argument("interpolate_nodal: two-component space required for a vector field");
  }
  FEField out(space);
  const int n = space->n_scalar_dofs();
  for (int i = 0; i < n; ++i) {
    const Vec2 v = f(space->node(i));
    for (int c = 0; c < 2; ++c) {
      const int dof = space->component_offset(c) + i;
      out.coeffs[dof] = (zero_dirichlet && space->is_dirichlet(dof)) ? 0.0 : v[c];
    }
  }
  return out;
}

FEField interpolate_edge(const SpacePtr& space, const VectorFn& v) {
  const ElementFamily fam = space->family();
  if (fam != ElementFamily::NE0 && fam != ElementFamily::NE1) {
    throw std::invalid_argument("interpolate_edge: NE0 or NE1 space required");
  }
  const Mesh2D& m = space->mesh();
  const LineRule& g = gauss_line(5);
  const int moments = fam == ElementFamily::NE0 ? 1 : 2;
  FEField out(space);
  for (int e = 0; e < m.num_edges(); ++e) {
    const Vec2& a = m.vertex(m.edge(e)[0]);
    const Vec2& b = m.vertex(m.edge(e)[1]);
    const Vec2 tangent = b - a;
    for (int q = 0; q < moments; ++q) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.points.size(); ++i) {
        const double st = g.points[i];
        const double leg = q == 0 ? 1.0 : 2.0 * st - 1.0;
        s += g.weights[i] * v(a + st * tangent).dot(tangent) * leg;
      }
      out.coeffs[moments * e + q] = s;
    }
  }
  return out;
}

SparseMatrix gradient_matrix(const FESpace& scalar_space, const FESpace& edge_space) {
  const Mesh2D& m = scalar_space.mesh();
  if (&m != &edge_space.mesh()) {
    throw std::invalid_argument("gradient_matrix: spaces live on different meshes");
  }
  std::vector<Eigen::Triplet<double>> trip;
  const int nv = m.num_vertices();
  if (scalar_space.family() == ElementFamily::P1 && edge_space.family() == ElementFamily::NE0) {
    for (int e = 0; e < m.num_edges(); ++e) {
      trip.emplace_back(e, m.edge(e)[1], 1.0);
      trip.emplace_back(e, m.edge(e)[0], -1.0);
    }
  } else if (scalar_space.family() == ElementFamily::P2 && edge_space.family() == ElementFamily::NE1) {
    // Moment against 1: difference of end values. Moment against 2s-1:
    // f(a) + f(b) - 2 * (mean of f over the edge), exact for quadratics.
    for (int e = 0; e < m.num_edges(); ++e) {
      const int lo = m.edge(e)[0];
      const int hi = m.edge(e)[1];
      trip.emplace_back(2 * e, hi, 1.0);
      trip.emplace_back(2 * e, lo, -1.0);
      trip.emplace_back(2 * e + 1, hi, 2.0 / 3.0);
      trip.emplace_back(2 * e + 1, lo, 2.0 / 3.0);
      trip.emplace_back(2 * e + 1, nv + e, -4.0 / 3.0);
    }
  } else {
    throw std::invalid_argument("gradient_matrix: supported pairs are P1->NE0 and P2->NE1");
  }
  SparseMatrix g(edge_space.n_dofs(), scalar_space.n_dofs());
  g.setFromTriplets(trip.begin(), trip.end());
  return g;
}

DofPartition partition_dofs(const std::vector<char>& mask) {
  DofPartition p;
  p.position.resize(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    auto& bucket = mask[i] ? p.fixed : p.free;
    p.position[i] = static_cast<int>(bucket.size());
    bucket.push_back(static_cast<int>(i));
  }
  return p;
}

DofPartition partition_all_free(int n) {
  return partition_dofs(std::vector<char>(static_cast<std::size_t>(n), 0));
}

}  // namespace fhd
