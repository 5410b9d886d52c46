#include "fhd/material.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fhd {

namespace {

// Below this argument the closed forms lose digits to cancellation; the
// truncated series is accurate to ~1e-19 there.
constexpr double kSeriesCutoff = 0.25;
// Above this argument sinh and cosh are replaced by their exponential forms.
constexpr double kAsymptoticCutoff = 30.0;

// coth(y) - 1/y = sum_n c_n y^(2n-1), c_n = 2^(2n) B_(2n) / (2n)!.
constexpr std::array<double, 8> kLangevinSeries = {
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
    -1382.0 / 638512875.0,
    4.0 / 18243225.0,
    -3617.0 / 162820783125.0,
};

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw std::domain_error(std::string(what) + ": argument must be >= 0, got " + std::to_string(x));
  }
}

}  // namespace

void MaterialParams::validate() const {
  const std::array<std::pair<const char*, double>, 5> fields = {
      {{"mu0", mu0}, {"Ms", Ms}, {"gamma", gamma}, {"rho", rho}, {"eta", eta}}};
  for (const auto& [name, v] : fields) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("MaterialParams: ") + name + " must be positive, got " +
                                  std::to_string(v));
    }
  }
}

MaterialParams MaterialParams::from_susceptibility(double mu0, double Ms, double chi0, double rho,
                                                   double eta) {
  if (!(chi0 > 0.0)) throw std::invalid_argument("MaterialParams: chi0 must be positive");
  if (!(Ms > 0.0)) throw std::invalid_argument("MaterialParams: Ms must be positive");
  MaterialParams p{mu0, Ms, 3.0 * chi0 / Ms, rho, eta};
  p.validate();
  return p;
}

double langevin_over_y(double y) {
  require_nonnegative(y, "langevin_over_y");
  if (y < kSeriesCutoff) {
    const double y2 = y * y;
    double s = 0.0;
    for (auto it = kLangevinSeries.rbegin(); it != kLangevinSeries.rend(); ++it) s = s * y2 + *it;
    return s;
  }
  return langevin(y) / y;
}

double langevin(double y) {
  require_nonnegative(y, "langevin");
  if (y < kSeriesCutoff) return y * langevin_over_y(y);
  if (y > kAsymptoticCutoff) {
    const double e = std::exp(-2.0 * y);
    return 1.0 + 2.0 * e / (1.0 - e) - 1.0 / y;
  }
  return 1.0 / std::tanh(y) - 1.0 / y;
}

double log_sinhc(double y) {
  require_nonnegative(y, "log_sinhc");
  if (y < kSeriesCutoff) {
    // Term-wise integral of the Langevin series.
    const double y2 = y * y;
    double s = 0.0;
    for (int n = static_cast<int>(kLangevinSeries.size()); n >= 1; --n) {
      s = s * y2 + kLangevinSeries[n - 1] / (2.0 * n);
    }
    return s * y2;
  }
  if (y > kAsymptoticCutoff) {
    return y - std::log(2.0) + std::log1p(-std::exp(-2.0 * y)) - std::log(y);
  }
  return std::log(std::sinh(y) / y);
}

double alpha(double x, const MaterialParams& p) {
  require_nonnegative(x, "alpha");
  return 1.0 + p.Ms * p.gamma * langevin_over_y(p.gamma * x);
}

double beta(double x, const MaterialParams& p) {
  require_nonnegative(x, "beta");
  return p.Ms / p.gamma * (log_sinhc(p.gamma * x) + std::log(p.gamma));
}

double beta_prime(double x, const MaterialParams& p) {
  require_nonnegative(x, "beta_prime");
  return p.Ms * langevin(p.gamma * x);
}

Vec2 magnetization(const Vec2& h, const MaterialParams& p) {
  return (p.Ms * p.gamma * langevin_over_y(p.gamma * h.norm())) * h;
}

double alpha_prime_fd(double x, const MaterialParams& p) {
  require_nonnegative(x, "alpha_prime_fd");
  const double step = 1e-6 * std::max(x, 1e-3);
  if (x < step) return (alpha(x + step, p) - alpha(x, p)) / step;
  return (alpha(x + step, p) - alpha(x - step, p)) / (2.0 * step);
}

AlphaLaw default_alpha_law(const MaterialParams& p) {
  return [p](double x) { return alpha(x, p); };
}

}  // namespace fhd
