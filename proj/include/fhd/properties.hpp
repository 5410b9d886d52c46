#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fhd/material.hpp"

namespace fhd {

struct PropertyResult {
  std::string name;
  bool pass = false;
  /// Worst observed value of the checked quantity (violation or ratio).
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct PropertyOptions {
  std::uint64_t seed = 42;
  MaterialParams params;
  /// Replaces alpha everywhere in the battery; used for negative controls.
  AlphaLaw alpha_override;
};

/// alpha clipped to stay below 1; violates the lower bound 1 < alpha.
AlphaLaw clipped_alpha_law(const MaterialParams& p, double ceiling = 0.9);

// Individual checks. Each returns one result and never throws on a failed check.

/// 1 < alpha(x) <= 1 + gamma Ms / 3 on 1000 log-spaced x in [1e-12, 1e6].
PropertyResult check_alpha_bounds(const PropertyOptions& opts);
/// 0 < beta'(x) <= Ms from central differences of beta, tolerance 1e-8, and
/// agreement with the closed form.
PropertyResult check_beta_prime_bounds(const PropertyOptions& opts);
/// a(w; phi, phi) >= ||grad phi||^2 and a(w; phi, tau) <= C1 ||grad phi|| ||grad tau||
/// for 100 random discrete triples on both element pairs.
PropertyResult check_coercivity_continuity(const PropertyOptions& opts);
/// b(w; u, v) = -b(w; v, u) and b(w; v, v) = 0 for 100 random triples.
PropertyResult check_skew_symmetry(const PropertyOptions& opts);
/// Edge interpolant of grad f equals G times the nodal interpolant of f.
PropertyResult check_commuting_diagram(const PropertyOptions& opts);
/// Discrete inf-sup constants on N = 4, 8, 16 vary by at most 10%.
PropertyResult check_inf_sup(const PropertyOptions& opts);
/// ||grad phi_h|| <= ||H_e|| / mu0 and eta |u_h|_{1,h}^2 <= (f, u_h) for an
/// external-field problem.
PropertyResult check_stability(const PropertyOptions& opts);

/// Discrete inf-sup constant of the velocity/pressure pair on an N x N mesh
/// (second smallest generalized eigenvalue, square-rooted).
double inf_sup_constant(int level, bool second_order_pair);

std::vector<PropertyResult> run_property_battery(const PropertyOptions& opts);

}  // namespace fhd
