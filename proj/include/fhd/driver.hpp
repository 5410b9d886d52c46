#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fhd/assembly.hpp"
#include "fhd/fespace.hpp"
#include "fhd/linalg.hpp"
#include "fhd/material.hpp"

namespace fhd {

/// l0: (P1, NE0, CR^2, P0). l1: (P2, NE1, P2^2, P1).
enum class ElementPair { l0, l1 };

std::string to_string(ElementPair pair);
ElementPair parse_element_pair(const std::string& text);

/// Mesh and the four spaces of one element pair, plus the gradient inclusion.
struct Discretization {
  int level = 0;
  ElementPair pair = ElementPair::l0;
  std::shared_ptr<const Mesh2D> mesh;
  SpacePtr S;  // potential
  SpacePtr U;  // magnetic field and magnetization
  SpacePtr V;  // velocity
  SpacePtr W;  // modified pressure, psi, pressure
  SparseMatrix G;
  double h = 0.0;
};

Discretization make_discretization(int level, ElementPair pair);

/// Data entering the decoupled solve.
struct ProblemData {
  std::string name;
  /// F such that -(g, tau) = (F, grad tau); alpha(|grad phi|) grad phi for a
  /// manufactured potential, H_e / mu0 for an external field.
  VectorFn magnetic_flux;
  /// Body force f of the momentum equation.
  VectorFn body_force;
  /// Dirichlet data for the velocity; null means homogeneous.
  VectorFn velocity_boundary;
};

/// Problem with an external field H_e (H_e . n = 0 on the boundary), body
/// force f and a no-slip wall.
ProblemData external_field_problem(VectorFn external_field, VectorFn body_force, double mu0);

struct FhdConfig {
  int level = 16;
  ElementPair pair = ElementPair::l0;
  MaterialParams params;
  int picard_iters = 2;
  int oseen_iters = 2;
  int quad_bump = 2;
  /// When set, Picard sweeps stop once ||grad(phi^n - phi^(n-1))|| drops below it.
  std::optional<double> picard_tolerance;
  /// Recover H_h from the edge-mass system instead of G * phi_h.
  bool h_by_mass_solve = false;
  /// Replaces alpha in the elliptic solve and magnetization recovery.
  AlphaLaw alpha_override;
  ProblemData problem;

  void validate() const;
  AlphaLaw alpha_law() const;
};

struct StageReport {
  std::string stage;
  SolveReport report;
};

struct EnergyCheck {
  double viscous_energy;  // eta |u_h|_{1,h}^2
  double work;            // (f, u_h)
};

struct FhdDiagnostics {
  std::vector<StageReport> solves;
  std::vector<double> picard_increments;  // ||grad(phi^n - phi^(n-1))||
  std::vector<double> oseen_increments;   // |u^n - u^(n-1)|_{1,h}
  std::vector<EnergyCheck> energy;        // one per velocity iterate, Stokes guess first
  double picard_sweep_residual = 0.0;     // linear residual of the last sweep, relative
  double picard_nonlinear_residual = 0.0; // a(phi_h; phi_h, .) + (g, .) on free dofs, relative
  double grad_phi_norm = 0.0;
  double grad_u_norm = 0.0;
  double max_saturation_ratio = 0.0;      // max |(alpha(|H_h|)-1) H_h| / Ms at quadrature points
  double divergence_residual = 0.0;       // max |(div_h u_h, q_i)| over pressure basis
};

struct FhdSolution {
  FEField phi;
  FEField H;
  FEField M;
  FEField u;
  FEField p_mod;  // modified pressure p - mu0 psi, zero mean
  FEField psi;
  FEField p;      // p_mod + mu0 psi, shifted to zero mean
  FEField B;      // mu0 (H + M)
  FhdDiagnostics diag;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(std::string stage, SolveReport report);
  const std::string& stage() const { return stage_; }
  const SolveReport& report() const { return report_; }

 private:
  std::string stage_;
  SolveReport report_;
};

/// Poisson problem (alpha = 1) with the same right-hand side.
FEField initial_guess_phi(const Discretization& disc, const FhdConfig& cfg, FhdDiagnostics* diag = nullptr);

/// Stokes problem with the same force and boundary data. Returns (u, p_mod).
std::pair<FEField, FEField> initial_guess_velocity(const Discretization& disc, const FhdConfig& cfg,
                                                   FhdDiagnostics* diag = nullptr);

/// Frozen-coefficient sweeps a(phi^(n-1); phi^n, tau) = -(g, tau).
FEField picard_elliptic(const Discretization& disc, const FhdConfig& cfg, const FEField& phi0,
                        FhdDiagnostics* diag = nullptr);

/// Oseen sweeps with the convecting field frozen at the previous iterate.
std::pair<FEField, FEField> oseen_ns(const Discretization& disc, const FhdConfig& cfg, const FEField& u0,
                                     FhdDiagnostics* diag = nullptr);

/// H_h, M_h, psi_h, p_h and B_h from phi_h and (u_h, p_mod_h).
FhdSolution recover_fields(const Discretization& disc, const FhdConfig& cfg, FEField phi, FEField u,
                           FEField p_mod, FhdDiagnostics diag = {});

/// Whole decoupled solve on a prebuilt discretization / from the config alone.
FhdSolution solve_fhd(const Discretization& disc, const FhdConfig& cfg);
FhdSolution solve_fhd(const FhdConfig& cfg);

/// Zero-mean shift of a pressure-space field.
void remove_mean(FEField& field);
double field_mean(const FEField& field);

}  // namespace fhd
