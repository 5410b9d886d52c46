#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fhd/driver.hpp"

namespace fhd {

using MatrixFn = std::function<Mat2(const Vec2&)>;

/// Exact solution of the stationary model with analytic derivatives.
struct ManufacturedCase {
  std::string name;
  MaterialParams params;
  ScalarFn phi;
  VectorFn grad_phi;
  MatrixFn hess_phi;
  VectorFn u;
  MatrixFn grad_u;  // row c = grad of component c
  VectorFn lap_u;
  ScalarFn p;
  VectorFn grad_p;
  /// Mean of psi over the unit square, so that p_mod() has zero mean.
  double psi_mean = 0.0;

  Vec2 H(const Vec2& x) const { return grad_phi(x); }
  Vec2 M(const Vec2& x) const;
  double psi(const Vec2& x) const;
  /// p - mu0 (psi - mean psi).
  double p_mod(const Vec2& x) const;
  Vec2 grad_psi(const Vec2& x) const;
  /// rho (u.grad)u - eta lap u + grad p_mod.
  Vec2 body_force(const Vec2& x) const;

  /// Flux, force and velocity boundary data for the decoupled solve.
  ProblemData problem_data() const;
  /// Solver config for one level with this case's data and parameters.
  FhdConfig config(int level, ElementPair pair) const;
};

/// Lowest-order reference case: phi = (x^2-x)(y^2-y), u = (sin pi y, sin pi x),
/// p = 60 x^2 y - 20 y^3 - 5.
ManufacturedCase case_2d_l0(const MaterialParams& params = {});

/// Smooth case for the second-order pair: phi = sin(pi x) sin(pi y) / (2 pi),
/// same u and p.
ManufacturedCase case_2d_l1(const MaterialParams& params = {});

ManufacturedCase case_for_pair(ElementPair pair, const MaterialParams& params = {});

/// Integral over the unit square by a degree-8 rule on an n x n mesh.
double integrate_unit_square(const ScalarFn& f, int n = 32);

// --- error norms --------------------------------------------------------------

struct ErrorValue {
  double absolute = 0.0;
  double exact_norm = 0.0;
  double relative = 0.0;
  /// Set when the exact norm is below 1e-14; `relative` then holds `absolute`.
  bool guarded = false;
};

/// All norms use a degree-8 rule per triangle.
constexpr int kErrorQuadDegree = 8;

/// ||grad(f - f_h)|| for a scalar Lagrange field.
ErrorValue error_h1_semi(const FEField& field, const VectorFn& grad_exact);
/// ||f - f_h|| for a scalar Lagrange field.
ErrorValue error_l2(const FEField& field, const ScalarFn& exact);
/// ||v - v_h|| for an edge or vector Lagrange field.
ErrorValue error_l2(const FEField& field, const VectorFn& exact);
/// (||v - v_h||^2 + ||curl(v - v_h)||^2)^(1/2) for an edge field.
ErrorValue error_hcurl(const FEField& field, const VectorFn& exact, const ScalarFn& curl_exact);
/// Broken seminorm (sum_K ||grad(u - u_h)||_K^2)^(1/2) of a vector Lagrange or
/// CR field, `full_norm` adds the L2 part. The relative value is always taken
/// against the full H1 norm of u.
ErrorValue error_h1_broken(const FEField& field, const VectorFn& exact, const MatrixFn& grad_exact,
                           bool full_norm = false);
/// max |curl v_h| over quadrature points and vertices of every triangle.
double curl_inf(const FEField& field);

// --- observed orders ----------------------------------------------------------

struct OrderFit {
  std::vector<double> pairwise;  // one per consecutive pair
  double least_squares = 0.0;    // slope of log e against log h
};

/// Throws std::invalid_argument for fewer than two levels, length mismatch or
/// nonpositive entries.
OrderFit convergence_orders(const std::vector<double>& errors, const std::vector<double>& hs);

// --- convergence study --------------------------------------------------------

/// Column order of the study table.
enum Column { kPhi = 0, kH, kM, kU, kP, kNumErrorColumns };
const char* column_name(int column);

struct LevelRow {
  int N = 0;
  double h = 0.0;
  std::array<double, kNumErrorColumns> err{};
  double curl_inf = 0.0;
  FhdDiagnostics diag;
  double seconds = 0.0;
};

/// Relative errors of one solution against the case.
LevelRow measure_errors(const ManufacturedCase& mc, const Discretization& disc, const FhdSolution& sol);

struct StudyOptions {
  ElementPair pair = ElementPair::l0;
  std::vector<int> levels{4, 8, 16, 32, 64, 128};
  MaterialParams params;
  int picard_iters = 2;
  int oseen_iters = 2;
  int quad_bump = 2;
  /// Run levels on separate threads; rows are still ordered by level.
  bool parallel_levels = false;
};

struct StudyReport {
  std::string case_name;
  ElementPair pair = ElementPair::l0;
  std::vector<LevelRow> rows;
  /// Filled when at least two rows exist.
  std::array<std::optional<OrderFit>, kNumErrorColumns> orders;
  bool failed = false;
  int failed_level = 0;
  std::string failure;
};

/// Throws std::invalid_argument for an empty or non-ascending level list.
/// Solver failures stop the study; the report keeps the completed rows.
StudyReport run_convergence_study(const StudyOptions& opts);

// --- iteration sufficiency ----------------------------------------------------

struct IterationGap {
  int N = 0;
  /// Norm of (short - long) per column, in the column's error norm.
  std::array<double, kNumErrorColumns> gap{};
  /// Absolute discretization error of the long-iteration solution.
  std::array<double, kNumErrorColumns> error{};
  double worst_ratio() const;
};

/// Solves the manufactured case twice on one mesh, with `short_iters` and
/// `long_iters` Picard and Oseen sweeps, and compares the two solutions.
IterationGap iteration_gap(ElementPair pair, int level, int short_iters, int long_iters,
                           const MaterialParams& params = {});

}  // namespace fhd
