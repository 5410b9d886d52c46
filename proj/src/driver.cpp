#include "fhd/driver.hpp"

#include <cmath>

namespace fhd {

namespace {

const std::string kStagePoisson = "poisson_guess";
const std::string kStageStokes = "stokes_guess";
const std::string kStagePicard = "picard";
const std::string kStageOseen = "oseen";
const std::string kStageH = "recover_H";
const std::string kStageM = "recover_M";
const std::string kStagePsi = "recover_psi";

void record(FhdDiagnostics* diag, const std::string& stage, const SolveReport& report) {
  if (diag) diag->solves.push_back({stage, report});
  if (!report.ok()) throw SolverError(stage, report);
}

AssemblyOptions assembly_options(const FhdConfig& cfg) {
  AssemblyOptions opts;
  opts.quad_bump = cfg.quad_bump;
  return opts;
}

// Solves the S_h system with homogeneous Dirichlet data; returns the full
// coefficient vector.
Vector solve_potential(const FESpace& space, const SparseMatrix& a, const Vector& rhs, const std::string& stage,
                       FhdDiagnostics* diag, double* relative_residual = nullptr) {
  const DofPartition part = partition_dofs(space.dirichlet_mask());
  const SparseMatrix aff = submatrix(a, part.free, part.free);
  const Vector bf = gather(rhs, part.free);
  SpdResult res = solve_spd(aff, bf);
  record(diag, stage, res.report);
  if (relative_residual) *relative_residual = res.report.relative_residual;
  Vector x = Vector::Zero(space.n_dofs());
  scatter(res.x, part.free, x);
  return x;
}

Vector velocity_lift(const FESpace& v, const ProblemData& problem) {
  Vector lift = Vector::Zero(v.n_dofs());
  if (!problem.velocity_boundary) return lift;
  const int n = v.n_scalar_dofs();
  for (int i = 0; i < n; ++i) {
    if (!v.is_dirichlet(i)) continue;
    const Vec2 g = problem.velocity_boundary(v.node(i));
    lift[i] = g.x();
    lift[v.component_offset(1) + i] = g.y();
  }
  return lift;
}

struct VelocitySolve {
  Vector u;
  Vector p;
};

// One linear Stokes (conv empty) or Oseen solve with Dirichlet lifting.
VelocitySolve solve_velocity(const Discretization& disc, const SaddleSystem& blocks, const SparseMatrix* conv,
                             const Vector& load, const Vector& lift, const std::string& stage,
                             FhdDiagnostics* diag) {
  const FESpace& v = *disc.V;
  const DofPartition part = partition_dofs(v.dirichlet_mask());
  SparseMatrix k = blocks.A;
  if (conv) k += *conv;
  std::vector<int> all_p(static_cast<std::size_t>(disc.W->n_dofs()));
  for (std::size_t i = 0; i < all_p.size(); ++i) all_p[i] = static_cast<int>(i);

  SaddleSystem sys;
  sys.A = submatrix(k, part.free, part.free);
  sys.B = submatrix(blocks.B, all_p, part.free);
  const Vector lift_fixed = gather(lift, part.fixed);
  sys.rhs_u = gather(load, part.free) - submatrix(k, part.free, part.fixed) * lift_fixed;
  sys.rhs_p = -(submatrix(blocks.B, all_p, part.fixed) * lift_fixed);
  sys.mean_constraint = blocks.mean_constraint;

  SaddleResult res = solve_saddle(sys);
  record(diag, stage, res.report);
  VelocitySolve out{lift, res.p};
  scatter(res.u, part.free, out.u);
  return out;
}

double broken_seminorm(const SaddleSystem& blocks, double eta, const Vector& u) {
  return std::sqrt(std::max(0.0, u.dot(blocks.A * u) / eta));
}

}  // namespace

std::string to_string(ElementPair pair) { return pair == ElementPair::l0 ? "l0" : "l1"; }

ElementPair parse_element_pair(const std::string& text) {
  if (text == "l0") return ElementPair::l0;
  if (text == "l1") return ElementPair::l1;
  throw std::invalid_argument("unknown element pair '" + text + "' (expected l0 or l1)");
}

Discretization make_discretization(int level, ElementPair pair) {
  Discretization d;
  d.level = level;
  d.pair = pair;
  d.mesh = std::make_shared<const Mesh2D>(build_uniform_square(level));
  if (pair == ElementPair::l0) {
    d.S = build_space(d.mesh, ElementFamily::P1);
    d.U = build_space(d.mesh, ElementFamily::NE0);
    d.V = build_space(d.mesh, ElementFamily::CR, 2);
    d.W = build_space(d.mesh, ElementFamily::P0);
  } else {
    d.S = build_space(d.mesh, ElementFamily::P2);
    d.U = build_space(d.mesh, ElementFamily::NE1);
    d.V = build_space(d.mesh, ElementFamily::P2, 2);
    d.W = build_space(d.mesh, ElementFamily::P1);
  }
  d.G = gradient_matrix(*d.S, *d.U);
  d.h = mesh_size(*d.mesh);
  return d;
}

ProblemData external_field_problem(VectorFn external_field, VectorFn body_force, double mu0) {
  ProblemData p;
  p.name = "external_field";
  p.magnetic_flux = external_field_flux(std::move(external_field), mu0);
  p.body_force = std::move(body_force);
  return p;
}

void FhdConfig::validate() const {
  params.validate();
  if (level < 1) throw std::invalid_argument("FhdConfig: level must be >= 1");
  if (picard_iters < 1) throw std::invalid_argument("FhdConfig: picard_iters must be >= 1");
  if (oseen_iters < 1) throw std::invalid_argument("FhdConfig: oseen_iters must be >= 1");
  if (quad_bump < 0) throw std::invalid_argument("FhdConfig: quad_bump must be >= 0");
  if (!problem.magnetic_flux || !problem.body_force) {
    throw std::invalid_argument("FhdConfig: problem data is incomplete");
  }
}

AlphaLaw FhdConfig::alpha_law() const {
  return alpha_override ? alpha_override : default_alpha_law(params);
}

SolverError::SolverError(std::string stage, SolveReport report)
    : std::runtime_error("solver failure in stage '" + stage + "': " + to_string(report.status) +
                         " (relative residual " + std::to_string(report.relative_residual) + ")"),
      stage_(std::move(stage)),
      report_(report) {}

FEField initial_guess_phi(const Discretization& disc, const FhdConfig& cfg, FhdDiagnostics* diag) {
  const AssemblyOptions opts = assembly_options(cfg);
  const SparseMatrix a = assemble_stiffness(*disc.S, opts);
  const Vector rhs = assemble_elliptic_rhs(*disc.S, cfg.problem.magnetic_flux, opts);
  return FEField(disc.S, solve_potential(*disc.S, a, rhs, kStagePoisson, diag));
}

std::pair<FEField, FEField> initial_guess_velocity(const Discretization& disc, const FhdConfig& cfg,
                                                   FhdDiagnostics* diag) {
  const AssemblyOptions opts = assembly_options(cfg);
  const SaddleSystem blocks = assemble_stokes_blocks(*disc.V, *disc.W, cfg.params.eta, opts);
  const Vector load = assemble_vector_load(*disc.V, cfg.problem.body_force, opts);
  const Vector lift = velocity_lift(*disc.V, cfg.problem);
  VelocitySolve s = solve_velocity(disc, blocks, nullptr, load, lift, kStageStokes, diag);
  if (diag) {
    const double semi = broken_seminorm(blocks, cfg.params.eta, s.u);
    diag->energy.push_back({cfg.params.eta * semi * semi, load.dot(s.u)});
  }
  return {FEField(disc.V, std::move(s.u)), FEField(disc.W, std::move(s.p))};
}

FEField picard_elliptic(const Discretization& disc, const FhdConfig& cfg, const FEField& phi0,
                        FhdDiagnostics* diag) {
  const AssemblyOptions opts = assembly_options(cfg);
  const AlphaLaw law = cfg.alpha_law();
  const Vector rhs = assemble_elliptic_rhs(*disc.S, cfg.problem.magnetic_flux, opts);
  const SparseMatrix lap = assemble_stiffness(*disc.S, opts);
  FEField phi = phi0;
  double sweep_residual = 0.0;
  for (int n = 1; n <= cfg.picard_iters; ++n) {
    const SparseMatrix a = assemble_weighted_stiffness(*disc.S, phi, law, opts);
    Vector next = solve_potential(*disc.S, a, rhs, kStagePicard, diag, &sweep_residual);
    const Vector delta = next - phi.coeffs;
    const double increment = std::sqrt(std::max(0.0, delta.dot(lap * delta)));
    phi.coeffs = std::move(next);
    if (diag) diag->picard_increments.push_back(increment);
    if (cfg.picard_tolerance && increment < *cfg.picard_tolerance) break;
  }
  if (diag) {
    diag->picard_sweep_residual = sweep_residual;
    const DofPartition part = partition_dofs(disc.S->dirichlet_mask());
    const SparseMatrix a = assemble_weighted_stiffness(*disc.S, phi, law, opts);
    const Vector r = gather(Vector(a * phi.coeffs - rhs), part.free);
    const double scale = gather(rhs, part.free).norm();
    diag->picard_nonlinear_residual = scale > 0.0 ? r.norm() / scale : r.norm();
  }
  return phi;
}

std::pair<FEField, FEField> oseen_ns(const Discretization& disc, const FhdConfig& cfg, const FEField& u0,
                                     FhdDiagnostics* diag) {
  const AssemblyOptions opts = assembly_options(cfg);
  const SaddleSystem blocks = assemble_stokes_blocks(*disc.V, *disc.W, cfg.params.eta, opts);
  const Vector load = assemble_vector_load(*disc.V, cfg.problem.body_force, opts);
  const Vector lift = velocity_lift(*disc.V, cfg.problem);
  FEField u = u0;
  FEField p(disc.W);
  for (int n = 1; n <= cfg.oseen_iters; ++n) {
    const SparseMatrix conv = assemble_convection(*disc.V, u, cfg.params.rho, opts);
    VelocitySolve s = solve_velocity(disc, blocks, &conv, load, lift, kStageOseen, diag);
    if (diag) {
      const Vector delta = s.u - u.coeffs;
      diag->oseen_increments.push_back(broken_seminorm(blocks, cfg.params.eta, delta));
      const double semi = broken_seminorm(blocks, cfg.params.eta, s.u);
      diag->energy.push_back({cfg.params.eta * semi * semi, load.dot(s.u)});
    }
    u.coeffs = std::move(s.u);
    p.coeffs = std::move(s.p);
  }
  if (diag) {
    diag->grad_u_norm = broken_seminorm(blocks, cfg.params.eta, u.coeffs);
    diag->divergence_residual = (blocks.B * u.coeffs).cwiseAbs().maxCoeff();
  }
  return {std::move(u), std::move(p)};
}

double field_mean(const FEField& field) {
  const Vector m = assemble_load(*field.space, [](int, const Barycentric&, const Vec2&) { return 1.0; }, 2);
  return field.coeffs.dot(m) / m.sum();
}

void remove_mean(FEField& field) {
  const FESpace& s = *field.space;
  if (s.family() != ElementFamily::P0 && s.family() != ElementFamily::P1 && s.family() != ElementFamily::P2) {
    throw std::invalid_argument("remove_mean: scalar Lagrange space required");
  }
  // Constants are reproduced exactly by every scalar Lagrange basis.
  field.coeffs.array() -= field_mean(field);
}

FhdSolution recover_fields(const Discretization& disc, const FhdConfig& cfg, FEField phi, FEField u,
                           FEField p_mod, FhdDiagnostics diag) {
  const AssemblyOptions opts = assembly_options(cfg);
  const AlphaLaw law = cfg.alpha_law();
  FhdSolution sol;

  // H_h = grad phi_h, an identity in U_h.
  sol.H = FEField(disc.U, disc.G * phi.coeffs);
  if (cfg.h_by_mass_solve) {
    const SparseMatrix mass = assemble_edge_mass(*disc.U, opts);
    const Vector rhs = assemble_edge_rhs(
        *disc.U, [&](int t, const Barycentric& b, const Vec2&) { return sample_at(phi, t, b).grad; }, opts);
    SpdResult r = solve_spd(mass, rhs);
    record(&diag, kStageH, r.report);
    sol.H.coeffs = r.x;
  }

  // L2 projections of the magnetization and of beta(|H_h|).
  {
    const SparseMatrix mass = assemble_edge_mass(*disc.U, opts);
    double max_ratio = 0.0;
    const Vector rhs = assemble_edge_rhs(
        *disc.U,
        [&](int t, const Barycentric& b, const Vec2&) {
          const Vec2 h = sample_at(sol.H, t, b).vvalue;
          const Vec2 m = (law(h.norm()) - 1.0) * h;
          max_ratio = std::max(max_ratio, m.norm() / cfg.params.Ms);
          return m;
        },
        opts);
    SpdResult r = solve_spd(mass, rhs);
    record(&diag, kStageM, r.report);
    sol.M = FEField(disc.U, r.x);
    diag.max_saturation_ratio = max_ratio;
  }
  {
    const SparseMatrix mass = assemble_mass(*disc.W, opts);
    const int k = family_info(disc.W->family()).degree;
    const Vector rhs = assemble_load(
        *disc.W,
        [&](int t, const Barycentric& b, const Vec2&) { return beta(sample_at(sol.H, t, b).vvalue.norm(), cfg.params); },
        std::min(8, 2 * k + 2 + cfg.quad_bump));
    SpdResult r = solve_spd(mass, rhs);
    record(&diag, kStagePsi, r.report);
    sol.psi = FEField(disc.W, r.x);
  }

  // Physical pressure and induction.
  sol.p = FEField(disc.W, p_mod.coeffs + cfg.params.mu0 * sol.psi.coeffs);
  remove_mean(sol.p);
  sol.B = FEField(disc.U, cfg.params.mu0 * (sol.H.coeffs + sol.M.coeffs));

  const SparseMatrix lap = assemble_stiffness(*disc.S, opts);
  diag.grad_phi_norm = std::sqrt(std::max(0.0, phi.coeffs.dot(lap * phi.coeffs)));
  sol.phi = std::move(phi);
  sol.u = std::move(u);
  sol.p_mod = std::move(p_mod);
  sol.diag = std::move(diag);
  return sol;
}

FhdSolution solve_fhd(const Discretization& disc, const FhdConfig& cfg) {
  cfg.validate();
  if (disc.level != cfg.level || disc.pair != cfg.pair) {
    throw std::invalid_argument("solve_fhd: discretization does not match the config");
  }
  FhdDiagnostics diag;
  // Potential and velocity are independent of each other.
  const FEField phi0 = initial_guess_phi(disc, cfg, &diag);
  FEField phi = picard_elliptic(disc, cfg, phi0, &diag);
  auto [u0, p0] = initial_guess_velocity(disc, cfg, &diag);
  auto [u, p_mod] = oseen_ns(disc, cfg, u0, &diag);
  return recover_fields(disc, cfg, std::move(phi), std::move(u), std::move(p_mod), std::move(diag));
}

FhdSolution solve_fhd(const FhdConfig& cfg) {
  cfg.validate();
  return solve_fhd(make_discretization(cfg.level, cfg.pair), cfg);
}

}  // namespace fhd
