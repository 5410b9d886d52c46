#pragma once

#include <functional>
#include <vector>

#include "fhd/fespace.hpp"
#include "fhd/linalg.hpp"
#include "fhd/material.hpp"

namespace fhd {

struct AssemblyOptions {
  /// Extra quadrature degrees on top of the polynomial exactness of each
  /// integrand, for terms with non-polynomial coefficients.
  int quad_bump = 2;
  /// Element traversal order; empty means 0..n-1.
  std::vector<int> element_order;
};

/// Value supplied at a quadrature point: triangle, reference point, physical point.
using PointScalar = std::function<double(int, const Barycentric&, const Vec2&)>;
using PointVector = std::function<Vec2(int, const Barycentric&, const Vec2&)>;

// --- scalar Lagrange space S_h ------------------------------------------------

/// sum_K int_K w(x) grad(phi_j) . grad(phi_i) over all dofs (no elimination).
SparseMatrix assemble_weighted_stiffness(const FESpace& space, const PointScalar& weight,
                                         const AssemblyOptions& opts = {});

/// Laplace stiffness, weight 1.
SparseMatrix assemble_stiffness(const FESpace& space, const AssemblyOptions& opts = {});

/// a(w; ., .) with weight alpha(|grad w_h|); w_h must live on `space`.
SparseMatrix assemble_weighted_stiffness(const FESpace& space, const FEField& w, const AlphaLaw& law,
                                         const AssemblyOptions& opts = {});

/// a(w; ., .) with weight alpha(|g(x)|) for an exact gradient field g.
SparseMatrix assemble_weighted_stiffness(const FESpace& space, const VectorFn& grad_w,
                                         const AlphaLaw& law, const AssemblyOptions& opts = {});

/// tau_i -> int F . grad(tau_i). The elliptic right-hand side -(g, tau) in
/// both supported forms is a flux pairing of this kind.
Vector assemble_elliptic_rhs(const FESpace& space, const VectorFn& flux, const AssemblyOptions& opts = {});

/// Weak residual flux alpha(|grad phi|) grad phi of an exact potential.
VectorFn manufactured_elliptic_flux(VectorFn grad_phi, AlphaLaw law);

/// External field flux H_e / mu0.
VectorFn external_field_flux(VectorFn external_field, double mu0);

// --- scalar mass/load (pressure-type spaces and projections) -----------------

SparseMatrix assemble_mass(const FESpace& space, const AssemblyOptions& opts = {});
Vector assemble_load(const FESpace& space, const PointScalar& f, int quad_degree);

// --- edge space U_h ----------------------------------------------------------

SparseMatrix assemble_edge_mass(const FESpace& space, const AssemblyOptions& opts = {});
Vector assemble_edge_rhs(const FESpace& space, const PointVector& v, const AssemblyOptions& opts = {});
Vector assemble_edge_rhs(const FESpace& space, const VectorFn& v, const AssemblyOptions& opts = {});

// --- velocity/pressure pair ---------------------------------------------------

/// Viscous block eta * sum_K (grad u, grad v)_K, divergence block and mean
/// constraint for (CR^2, P0) or (P2^2, P1); right-hand sides zero. Throws
/// std::invalid_argument for other pairs.
SaddleSystem assemble_stokes_blocks(const FESpace& velocity, const FESpace& pressure, double eta,
                                    const AssemblyOptions& opts = {});

/// N(w) with v^T N(w) u = b(w; u, v) = rho/2 [((w.grad)u, v) - ((w.grad)v, u)],
/// gradients taken element-wise. Exactly skew-symmetric.
SparseMatrix assemble_convection(const FESpace& velocity, const FEField& w, double rho,
                                 const AssemblyOptions& opts = {});

/// v_i -> int f . v_i for a vector Lagrange space.
Vector assemble_vector_load(const FESpace& velocity, const VectorFn& f, const AssemblyOptions& opts = {});

}  // namespace fhd
