#include "fhd/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "fhd/driver.hpp"
#include "fhd/verify.hpp"

namespace fhd {

namespace {

constexpr double kPi = 3.14159265358979323846;

AlphaLaw law_of(const PropertyOptions& opts) {
  return opts.alpha_override ? opts.alpha_override : default_alpha_law(opts.params);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double amplitude) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

struct PairSpaces {
  SpacePtr S;
  SpacePtr V;
  SpacePtr W;
};

PairSpaces spaces(int level, bool second_order) {
  auto mesh = std::make_shared<const Mesh2D>(build_uniform_square(level));
  if (second_order) {
    return {build_space(mesh, ElementFamily::P2), build_space(mesh, ElementFamily::P2, 2),
            build_space(mesh, ElementFamily::P1)};
  }
  return {build_space(mesh, ElementFamily::P1), build_space(mesh, ElementFamily::CR, 2),
          build_space(mesh, ElementFamily::P0)};
}

}  // namespace

AlphaLaw clipped_alpha_law(const MaterialParams& p, double ceiling) {
  return [p, ceiling](double x) { return std::min(alpha(x, p), ceiling); };
}

PropertyResult check_alpha_bounds(const PropertyOptions& opts) {
  PropertyResult r{"alpha_bounds", true, 0.0, 0.0, ""};
  const AlphaLaw law = law_of(opts);
  const double c1 = alpha_upper_bound(opts.params);
  const double upper_slack = 4.0 * std::numeric_limits<double>::epsilon() * c1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  constexpr int kSamples = 1000;
  for (int i = 0; i < kSamples; ++i) {
    const double x = std::pow(10.0, -12.0 + 18.0 * i / (kSamples - 1));
    const double a = law(x);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    if (!(a > 1.0) || !(a <= c1 + upper_slack)) {
      if (r.pass) r.detail = "alpha(" + fmt(x) + ") = " + fmt(a) + " outside (1, " + fmt(c1) + "]";
      r.pass = false;
    }
  }
  r.worst = lo - 1.0;
  r.tolerance = upper_slack;
  if (r.pass) r.detail = "min alpha - 1 = " + fmt(lo - 1.0) + ", max alpha = " + fmt(hi);
  return r;
}

PropertyResult check_beta_prime_bounds(const PropertyOptions& opts) {
  PropertyResult r{"beta_prime_bounds", true, 0.0, 1e-8, ""};
  const MaterialParams& p = opts.params;
  // beta minus its constant (Ms/gamma) ln(gamma); same derivative, no cancellation.
  auto g = [&](double x) { return p.Ms / p.gamma * log_sinhc(p.gamma * x); };
  constexpr int kSamples = 1000;
  double worst = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = std::pow(10.0, -12.0 + 18.0 * i / (kSamples - 1));
    const double h = 1e-4 * x;
    const double fd = (g(x + h) - g(x - h)) / (2.0 * h);
    const double exact = beta_prime(x, p);
    const double mismatch = std::abs(fd - exact) / std::max(1.0, std::abs(exact));
    worst = std::max(worst, mismatch);
    const bool ok = fd > -r.tolerance && fd <= p.Ms + r.tolerance && exact > 0.0 && exact <= p.Ms &&
                    mismatch <= r.tolerance;
    if (!ok) {
      if (r.pass) r.detail = "x = " + fmt(x) + ": fd " + fmt(fd) + ", closed form " + fmt(exact);
      r.pass = false;
    }
  }
  r.worst = worst;
  if (r.pass) r.detail = "max |fd - beta'| = " + fmt(worst);
  return r;
}

PropertyResult check_coercivity_continuity(const PropertyOptions& opts) {
  PropertyResult r{"coercivity_continuity", true, 0.0, 1e-12, ""};
  const AlphaLaw law = law_of(opts);
  const double c1 = alpha_upper_bound(opts.params);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> log_amp(-3.0, 1.0);
  double min_coercive = std::numeric_limits<double>::infinity();
  double max_cont = 0.0;
  for (bool second : {false, true}) {
    const SpacePtr s = spaces(second ? 4 : 8, second).S;
    const DofPartition part = partition_dofs(s->dirichlet_mask());
    const SparseMatrix lap = submatrix(assemble_stiffness(*s), part.free, part.free);
    for (int trial = 0; trial < 50; ++trial) {
      Vector wc = Vector::Zero(s->n_dofs());
      scatter(random_vector(rng, static_cast<Eigen::Index>(part.free.size()), std::pow(10.0, log_amp(rng))),
              part.free, wc);
      const FEField w(s, wc);
      const SparseMatrix a = submatrix(assemble_weighted_stiffness(*s, w, law), part.free, part.free);
      const Vector phi = random_vector(rng, lap.rows(), 1.0);
      const Vector tau = random_vector(rng, lap.rows(), 1.0);
      const double n_phi = std::sqrt(phi.dot(lap * phi));
      const double n_tau = std::sqrt(tau.dot(lap * tau));
      const double coercive = phi.dot(a * phi) / (n_phi * n_phi);
      const double cont = std::abs(tau.dot(a * phi)) / (n_phi * n_tau);
      min_coercive = std::min(min_coercive, coercive);
      max_cont = std::max(max_cont, cont / c1);
    }
  }
  r.pass = min_coercive >= 1.0 - r.tolerance && max_cont <= 1.0 + r.tolerance;
  r.worst = min_coercive;
  r.detail = "min a(w;phi,phi)/|phi|^2 = " + fmt(min_coercive) + ", max a(w;phi,tau)/(C1|phi||tau|) = " +
             fmt(max_cont);
  return r;
}

PropertyResult check_skew_symmetry(const PropertyOptions& opts) {
  PropertyResult r{"skew_symmetry", true, 0.0, 1e-13, ""};
  std::mt19937_64 rng(opts.seed + 1);
  double worst = 0.0;
  for (bool second : {false, true}) {
    const SpacePtr v = spaces(4, second).V;
    for (int trial = 0; trial < 50; ++trial) {
      const FEField w(v, random_vector(rng, v->n_dofs(), 1.0));
      const SparseMatrix n = assemble_convection(*v, w, opts.params.rho);
      const Vector a = random_vector(rng, v->n_dofs(), 1.0);
      const Vector b = random_vector(rng, v->n_dofs(), 1.0);
      const double sym = std::abs(b.dot(n * a) + a.dot(n * b));
      const double diag = std::abs(b.dot(n * b));
      worst = std::max({worst, sym, diag});
    }
  }
  r.worst = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "max |b(w;u,v) + b(w;v,u)|, |b(w;v,v)| = " + fmt(worst);
  return r;
}

PropertyResult check_commuting_diagram(const PropertyOptions&) {
  PropertyResult r{"commuting_diagram", true, 0.0, 1e-12, ""};
  auto mesh = std::make_shared<const Mesh2D>(build_uniform_square(8));
  // Lowest order: any smooth f. Second order: cubic f, reproduced exactly by
  // the P2 nodal interpolant along each edge.
  const ScalarFn smooth = [](const Vec2& x) { return std::sin(kPi * x.x()) * std::exp(x.y()) + x.x() * x.y(); };
  const VectorFn smooth_grad = [](const Vec2& x) {
    return Vec2(kPi * std::cos(kPi * x.x()) * std::exp(x.y()) + x.y(),
                std::sin(kPi * x.x()) * std::exp(x.y()) + x.x());
  };
  const ScalarFn cubic = [](const Vec2& x) {
    return x.x() * x.x() * x.x() - 2.0 * x.x() * x.y() * x.y() + 0.5 * x.y() * x.y() + x.x();
  };
  const VectorFn cubic_grad = [](const Vec2& x) {
    return Vec2(3.0 * x.x() * x.x() - 2.0 * x.y() * x.y() + 1.0, -4.0 * x.x() * x.y() + x.y());
  };
  double worst = 0.0;
  struct Case {
    ElementFamily s, u;
    ScalarFn f;
    VectorFn g;
  };
  for (const Case& c : {Case{ElementFamily::P1, ElementFamily::NE0, smooth, smooth_grad},
                        Case{ElementFamily::P2, ElementFamily::NE1, cubic, cubic_grad}}) {
    const SpacePtr s = build_space(mesh, c.s);
    const SpacePtr u = build_space(mesh, c.u);
    const Vector lhs = interpolate_edge(u, c.g).coeffs;
    const Vector rhs = gradient_matrix(*s, *u) * interpolate_nodal(s, c.f).coeffs;
    worst = std::max(worst, (lhs - rhs).lpNorm<Eigen::Infinity>());
  }
  r.worst = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "max |pi_c grad f - G pi_s f| = " + fmt(worst);
  return r;
}

double inf_sup_constant(int level, bool second_order_pair) {
  const PairSpaces ps = spaces(level, second_order_pair);
  const SaddleSystem blocks = assemble_stokes_blocks(*ps.V, *ps.W, 1.0);
  const DofPartition part = partition_dofs(ps.V->dirichlet_mask());
  std::vector<int> all_p(static_cast<std::size_t>(ps.W->n_dofs()));
  for (std::size_t i = 0; i < all_p.size(); ++i) all_p[i] = static_cast<int>(i);
  const Eigen::MatrixXd a = Eigen::MatrixXd(submatrix(blocks.A, part.free, part.free));
  const Eigen::MatrixXd b = Eigen::MatrixXd(submatrix(blocks.B, all_p, part.free));
  const Eigen::MatrixXd mp = Eigen::MatrixXd(assemble_mass(*ps.W));
  const Eigen::MatrixXd s = b * Eigen::LLT<Eigen::MatrixXd>(a).solve(b.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, mp, Eigen::EigenvaluesOnly);
  // The smallest eigenvalue belongs to the constant pressure.
  return std::sqrt(std::max(0.0, eig.eigenvalues()[1]));
}

PropertyResult check_inf_sup(const PropertyOptions&) {
  PropertyResult r{"inf_sup", true, 0.0, 0.10, ""};
  std::ostringstream detail;
  double worst = 0.0;
  for (bool second : {false, true}) {
    std::vector<double> betas;
    for (int level : {4, 8, 16}) betas.push_back(inf_sup_constant(level, second));
    const double hi = *std::max_element(betas.begin(), betas.end());
    const double lo = *std::min_element(betas.begin(), betas.end());
    const double spread = (hi - lo) / hi;
    worst = std::max(worst, spread);
    if (!(lo > 0.0)) r.pass = false;
    detail << (second ? " P2-P1" : "CR-P0") << " beta = " << fmt(betas[0]) << ", " << fmt(betas[1]) << ", "
           << fmt(betas[2]) << ";";
  }
  r.worst = worst;
  r.pass = r.pass && worst <= r.tolerance;
  r.detail = detail.str() + " max relative spread " + fmt(worst);
  return r;
}

PropertyResult check_stability(const PropertyOptions& opts) {
  PropertyResult r{"stability", true, 0.0, 1e-8, ""};
  const MaterialParams& p = opts.params;
  const VectorFn he = [](const Vec2& x) {
    return Vec2(5.0 * x.y() * (1.0 - x.y()) * (1.0 + x.x()), 5.0 * x.x() * (1.0 - x.x()));
  };
  const VectorFn f = [](const Vec2& x) { return Vec2(10.0 * std::sin(2.0 * kPi * x.y()), x.x() - 0.5); };
  const double he_norm = std::sqrt(integrate_unit_square([&](const Vec2& x) { return he(x).squaredNorm(); }));
  double worst_field = 0.0;
  double worst_energy = 0.0;
  for (ElementPair pair : {ElementPair::l0, ElementPair::l1}) {
    FhdConfig cfg;
    cfg.level = pair == ElementPair::l0 ? 8 : 4;
    cfg.pair = pair;
    cfg.params = p;
    cfg.alpha_override = opts.alpha_override;
    cfg.problem = external_field_problem(he, f, p.mu0);
    FhdSolution sol;
    try {
      sol = solve_fhd(cfg);
    } catch (const SolverError& e) {
      r.pass = false;
      r.detail = e.what();
      return r;
    }
    worst_field = std::max(worst_field, sol.diag.grad_phi_norm / (he_norm / p.mu0));
    for (const EnergyCheck& e : sol.diag.energy) {
      worst_energy = std::max(worst_energy, (e.viscous_energy - e.work) / std::max(1e-300, std::abs(e.work)));
    }
  }
  r.worst = std::max(worst_field - 1.0, worst_energy);
  r.pass = worst_field <= 1.0 + r.tolerance && worst_energy <= r.tolerance;
  r.detail = "max |grad phi_h| mu0/|H_e| = " + fmt(worst_field) + ", max (eta|u|^2 - (f,u))/|(f,u)| = " +
             fmt(worst_energy);
  return r;
}

std::vector<PropertyResult> run_property_battery(const PropertyOptions& opts) {
  return {check_alpha_bounds(opts),        check_beta_prime_bounds(opts), check_coercivity_continuity(opts),
          check_skew_symmetry(opts),       check_commuting_diagram(opts), check_inf_sup(opts),
          check_stability(opts)};
}

}  // namespace fhd
