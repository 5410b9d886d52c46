#pragma once

#include <functional>

#include "fhd/mesh2d.hpp"

namespace fhd {

/// Physical constants of the ferrofluid model. All strictly positive.
struct MaterialParams {
  double mu0 = 1.0;    // permeability
  double Ms = 1.0;     // saturation magnetization
  double gamma = 1.0;  // Langevin parameter, 3 chi0 / Ms
  double rho = 1.0;    // density
  double eta = 1.0;    // dynamic viscosity

  double chi0() const { return gamma * Ms / 3.0; }

  /// Throws std::invalid_argument when a constant is not strictly positive.
  void validate() const;

  /// Parameters with gamma derived from the initial susceptibility.
  static MaterialParams from_susceptibility(double mu0, double Ms, double chi0, double rho, double eta);
};

/// Langevin function coth(y) - 1/y for y >= 0.
double langevin(double y);

/// langevin(y) / y, finite at 0 with limit 1/3.
double langevin_over_y(double y);

/// ln(sinh(y) / y) for y >= 0, finite at 0 and free of overflow for large y.
double log_sinhc(double y);

/// alpha(x) = 1 + (Ms / x) L(gamma x); alpha(0) = 1 + gamma Ms / 3.
double alpha(double x, const MaterialParams& p);

/// beta(x) = (Ms / gamma) ln(sinh(gamma x) / x).
double beta(double x, const MaterialParams& p);

/// beta'(x) = Ms L(gamma x).
double beta_prime(double x, const MaterialParams& p);

/// M(H) = (alpha(|H|) - 1) H, zero at H = 0.
Vec2 magnetization(const Vec2& h, const MaterialParams& p);

/// Central finite-difference estimate of alpha'(x); diagnostic only.
double alpha_prime_fd(double x, const MaterialParams& p);

/// Upper bound C1 = 1 + gamma Ms / 3 of alpha.
inline double alpha_upper_bound(const MaterialParams& p) { return 1.0 + p.gamma * p.Ms / 3.0; }

/// Pluggable coefficient law used by assembly. Defaults to `alpha`.
using AlphaLaw = std::function<double(double)>;
AlphaLaw default_alpha_law(const MaterialParams& p);

}  // namespace fhd
