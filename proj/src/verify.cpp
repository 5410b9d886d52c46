#include "fhd/verify.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

namespace fhd {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNormGuard = 1e-14;

// The u column measures the broken seminorm against the full H1 norm of u.
constexpr bool kVelocityFullNorm = false;

ErrorValue make_error(double abs_sq, double exact_sq) {
  ErrorValue e;
  e.absolute = std::sqrt(std::max(0.0, abs_sq));
  e.exact_norm = std::sqrt(std::max(0.0, exact_sq));
  if (e.exact_norm < kNormGuard) {
    e.guarded = true;
    e.relative = e.absolute;
  } else {
    e.relative = e.absolute / e.exact_norm;
  }
  return e;
}

// Calls body(t, x, weight, sample) at every degree-8 point of every triangle.
template <class Body>
void for_each_point(const FEField& field, Body&& body) {
  if (!field.space) throw std::invalid_argument("error norm: field has no space");
  const FESpace& s = *field.space;
  const BasisTable& table = tabulate(s.family(), kErrorQuadDegree);
  const QuadratureRule& rule = *table.rule;
  for (int t = 0; t < s.mesh().num_triangles(); ++t) {
    const ElementGeometry geo(s.mesh(), t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const FieldSample fs = sample(field, t, geo, table.at[q]);
      body(geo.map(rule.points[q]), rule.weights[q] * geo.det, fs);
    }
  }
}

void require_lagrange_scalar(const FEField& f, const char* who) {
  if (!f.space || family_info(f.space->family()).edge_element || f.space->components() != 1) {
    throw std::invalid_argument(std::string(who) + ": scalar Lagrange field required");
  }
}

}  // namespace

Vec2 ManufacturedCase::M(const Vec2& x) const { return magnetization(grad_phi(x), params); }

double ManufacturedCase::psi(const Vec2& x) const { return beta(grad_phi(x).norm(), params); }

double ManufacturedCase::p_mod(const Vec2& x) const { return p(x) - params.mu0 * (psi(x) - psi_mean); }

Vec2 ManufacturedCase::grad_psi(const Vec2& x) const {
  const Vec2 h = grad_phi(x);
  return (alpha(h.norm(), params) - 1.0) * (hess_phi(x) * h);
}

Vec2 ManufacturedCase::body_force(const Vec2& x) const {
  const Vec2 uu = u(x);
  const Vec2 conv = grad_u(x) * uu;
  return params.rho * conv - params.eta * lap_u(x) + grad_p(x) - params.mu0 * grad_psi(x);
}

ProblemData ManufacturedCase::problem_data() const {
  ProblemData pd;
  pd.name = name;
  pd.magnetic_flux = manufactured_elliptic_flux(grad_phi, default_alpha_law(params));
  pd.body_force = [self = *this](const Vec2& x) { return self.body_force(x); };
  pd.velocity_boundary = u;
  return pd;
}

FhdConfig ManufacturedCase::config(int level, ElementPair pair) const {
  FhdConfig cfg;
  cfg.level = level;
  cfg.pair = pair;
  cfg.params = params;
  cfg.problem = problem_data();
  return cfg;
}

double integrate_unit_square(const ScalarFn& f, int n) {
  const Mesh2D mesh = build_uniform_square(n);
  const QuadratureRule& rule = quadrature(8);
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh, t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) sum += rule.weights[q] * geo.det * f(geo.map(rule.points[q]));
  }
  return sum;
}

namespace {

ManufacturedCase common_flow(const MaterialParams& params) {
  ManufacturedCase mc;
  mc.params = params;
  mc.u = [](const Vec2& x) { return Vec2(std::sin(kPi * x.y()), std::sin(kPi * x.x())); };
  mc.grad_u = [](const Vec2& x) {
    Mat2 g;
    g << 0.0, kPi * std::cos(kPi * x.y()), kPi * std::cos(kPi * x.x()), 0.0;
    return g;
  };
  mc.lap_u = [](const Vec2& x) {
    return Vec2(-kPi * kPi * std::sin(kPi * x.y()), -kPi * kPi * std::sin(kPi * x.x()));
  };
  mc.p = [](const Vec2& x) { return 60.0 * x.x() * x.x() * x.y() - 20.0 * std::pow(x.y(), 3) - 5.0; };
  mc.grad_p = [](const Vec2& x) {
    return Vec2(120.0 * x.x() * x.y(), 60.0 * x.x() * x.x() - 60.0 * x.y() * x.y());
  };
  return mc;
}

void finish_case(ManufacturedCase& mc) {
  mc.params.validate();
  mc.psi_mean = integrate_unit_square([&](const Vec2& x) { return mc.psi(x); }, 64);
}

}  // namespace

ManufacturedCase case_2d_l0(const MaterialParams& params) {
  ManufacturedCase mc = common_flow(params);
  mc.name = "l0";
  mc.phi = [](const Vec2& x) { return (x.x() * x.x() - x.x()) * (x.y() * x.y() - x.y()); };
  mc.grad_phi = [](const Vec2& x) {
    return Vec2((2.0 * x.x() - 1.0) * (x.y() * x.y() - x.y()), (x.x() * x.x() - x.x()) * (2.0 * x.y() - 1.0));
  };
  mc.hess_phi = [](const Vec2& x) {
    const double xy = (2.0 * x.x() - 1.0) * (2.0 * x.y() - 1.0);
    Mat2 h;
    h << 2.0 * (x.y() * x.y() - x.y()), xy, xy, 2.0 * (x.x() * x.x() - x.x());
    return h;
  };
  finish_case(mc);
  return mc;
}

ManufacturedCase case_2d_l1(const MaterialParams& params) {
  ManufacturedCase mc = common_flow(params);
  mc.name = "l1";
  const double a = 1.0 / (2.0 * kPi);
  mc.phi = [a](const Vec2& x) { return a * std::sin(kPi * x.x()) * std::sin(kPi * x.y()); };
  mc.grad_phi = [a](const Vec2& x) {
    return Vec2(a * kPi * std::cos(kPi * x.x()) * std::sin(kPi * x.y()),
                a * kPi * std::sin(kPi * x.x()) * std::cos(kPi * x.y()));
  };
  mc.hess_phi = [a](const Vec2& x) {
    const double s = a * kPi * kPi;
    const double ss = std::sin(kPi * x.x()) * std::sin(kPi * x.y());
    const double cc = std::cos(kPi * x.x()) * std::cos(kPi * x.y());
    Mat2 h;
    h << -s * ss, s * cc, s * cc, -s * ss;
    return h;
  };
  finish_case(mc);
  return mc;
}

ManufacturedCase case_for_pair(ElementPair pair, const MaterialParams& params) {
  return pair == ElementPair::l0 ? case_2d_l0(params) : case_2d_l1(params);
}

ErrorValue error_h1_semi(const FEField& field, const VectorFn& grad_exact) {
  require_lagrange_scalar(field, "error_h1_semi");
  double err = 0.0;
  double ref = 0.0;
  for_each_point(field, [&](const Vec2& x, double w, const FieldSample& s) {
    const Vec2 g = grad_exact(x);
    err += w * (g - s.grad).squaredNorm();
    ref += w * g.squaredNorm();
  });
  return make_error(err, ref);
}

ErrorValue error_l2(const FEField& field, const ScalarFn& exact) {
  require_lagrange_scalar(field, "error_l2");
  double err = 0.0;
  double ref = 0.0;
  for_each_point(field, [&](const Vec2& x, double w, const FieldSample& s) {
    const double f = exact(x);
    err += w * (f - s.value) * (f - s.value);
    ref += w * f * f;
  });
  return make_error(err, ref);
}

ErrorValue error_l2(const FEField& field, const VectorFn& exact) {
  if (!field.space || (field.space->components() != 2 && !family_info(field.space->family()).edge_element)) {
    throw std::invalid_argument("error_l2: vector-valued field required");
  }
  double err = 0.0;
  double ref = 0.0;
  for_each_point(field, [&](const Vec2& x, double w, const FieldSample& s) {
    const Vec2 v = exact(x);
    err += w * (v - s.vvalue).squaredNorm();
    ref += w * v.squaredNorm();
  });
  return make_error(err, ref);
}

ErrorValue error_hcurl(const FEField& field, const VectorFn& exact, const ScalarFn& curl_exact) {
  if (!field.space || !family_info(field.space->family()).edge_element) {
    throw std::invalid_argument("error_hcurl: edge field required");
  }
  double err = 0.0;
  double ref = 0.0;
  for_each_point(field, [&](const Vec2& x, double w, const FieldSample& s) {
    const Vec2 v = exact(x);
    const double c = curl_exact(x);
    err += w * ((v - s.vvalue).squaredNorm() + (c - s.curl) * (c - s.curl));
    ref += w * (v.squaredNorm() + c * c);
  });
  return make_error(err, ref);
}

ErrorValue error_h1_broken(const FEField& field, const VectorFn& exact, const MatrixFn& grad_exact,
                           bool full_norm) {
  if (!field.space || field.space->components() != 2) {
    throw std::invalid_argument("error_h1_broken: vector Lagrange field required");
  }
  double err = 0.0;
  double ref = 0.0;
  for_each_point(field, [&](const Vec2& x, double w, const FieldSample& s) {
    const Vec2 v = exact(x);
    const Mat2 g = grad_exact(x);
    err += w * (g - s.vgrad).squaredNorm();
    ref += w * (g.squaredNorm() + v.squaredNorm());
    if (full_norm) err += w * (v - s.vvalue).squaredNorm();
  });
  return make_error(err, ref);
}

double curl_inf(const FEField& field) {
  if (!field.space || !family_info(field.space->family()).edge_element) {
    throw std::invalid_argument("curl_inf: edge field required");
  }
  const FESpace& s = *field.space;
  const BasisTable& table = tabulate(s.family(), kErrorQuadDegree);
  std::vector<ReferenceBasis> refs = table.at;
  for (const Barycentric& b : {Barycentric{1, 0, 0}, Barycentric{0, 1, 0}, Barycentric{0, 0, 1}}) {
    refs.push_back(eval_basis(s.family(), b));
  }
  double worst = 0.0;
  for (int t = 0; t < s.mesh().num_triangles(); ++t) {
    const ElementGeometry geo(s.mesh(), t);
    for (const ReferenceBasis& ref : refs) worst = std::max(worst, std::abs(sample(field, t, geo, ref).curl));
  }
  return worst;
}

OrderFit convergence_orders(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size()) throw std::invalid_argument("convergence_orders: length mismatch");
  if (errors.size() < 2) throw std::invalid_argument("convergence_orders: at least two levels required");
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(hs[i] > 0.0)) {
      throw std::invalid_argument("convergence_orders: errors and mesh sizes must be positive");
    }
  }
  OrderFit fit;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    fit.pairwise.push_back(std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]));
  }
  const double n = static_cast<double>(errors.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double lx = std::log(hs[i]);
    const double ly = std::log(errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  fit.least_squares = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

const char* column_name(int column) {
  static const char* names[] = {"err_phi_h1", "err_H_hcurl", "err_M_l2", "err_u_h1h", "err_p_l2"};
  return names[column];
}

LevelRow measure_errors(const ManufacturedCase& mc, const Discretization& disc, const FhdSolution& sol) {
  LevelRow row;
  row.N = disc.level;
  row.h = disc.h;
  row.err[kPhi] = error_h1_semi(sol.phi, mc.grad_phi).relative;
  row.err[kH] = error_hcurl(sol.H, mc.grad_phi, [](const Vec2&) { return 0.0; }).relative;
  row.err[kM] = error_l2(sol.M, [&](const Vec2& x) { return mc.M(x); }).relative;
  row.err[kU] = error_h1_broken(sol.u, mc.u, mc.grad_u, kVelocityFullNorm).relative;
  row.err[kP] = error_l2(sol.p, mc.p).relative;
  row.curl_inf = curl_inf(sol.H);
  row.diag = sol.diag;
  return row;
}

namespace {

LevelRow run_level(const ManufacturedCase& mc, const StudyOptions& opts, int level) {
  const auto start = std::chrono::steady_clock::now();
  FhdConfig cfg = mc.config(level, opts.pair);
  cfg.picard_iters = opts.picard_iters;
  cfg.oseen_iters = opts.oseen_iters;
  cfg.quad_bump = opts.quad_bump;
  const Discretization disc = make_discretization(level, opts.pair);
  const FhdSolution sol = solve_fhd(disc, cfg);
  LevelRow row = measure_errors(mc, disc, sol);
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

StudyReport run_convergence_study(const StudyOptions& opts) {
  if (opts.levels.empty()) throw std::invalid_argument("run_convergence_study: no levels");
  for (std::size_t i = 0; i < opts.levels.size(); ++i) {
    if (opts.levels[i] < 1) throw std::invalid_argument("run_convergence_study: levels must be positive");
    if (i > 0 && opts.levels[i] <= opts.levels[i - 1]) {
      throw std::invalid_argument("run_convergence_study: levels must be ascending");
    }
  }
  const ManufacturedCase mc = case_for_pair(opts.pair, opts.params);
  StudyReport report;
  report.case_name = mc.name;
  report.pair = opts.pair;

  const std::size_t n = opts.levels.size();
  std::vector<std::optional<LevelRow>> rows(n);
  std::vector<std::string> errors(n);
  std::vector<std::exception_ptr> unexpected(n);
  auto work = [&](std::size_t i) {
    try {
      rows[i] = run_level(mc, opts, opts.levels[i]);
    } catch (const SolverError& e) {
      errors[i] = e.what();
    } catch (...) {
      unexpected[i] = std::current_exception();
    }
  };
  if (opts.parallel_levels && n > 1) {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      work(i);
      if (unexpected[i]) std::rethrow_exception(unexpected[i]);
      if (!rows[i]) break;
    }
  }
  for (const auto& ex : unexpected) {
    if (ex) std::rethrow_exception(ex);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i]) {
      report.failed = true;
      report.failed_level = opts.levels[i];
      report.failure = errors[i];
      break;
    }
    report.rows.push_back(std::move(*rows[i]));
  }

  if (report.rows.size() >= 2) {
    std::vector<double> hs;
    for (const auto& r : report.rows) hs.push_back(r.h);
    for (int c = 0; c < kNumErrorColumns; ++c) {
      std::vector<double> es;
      for (const auto& r : report.rows) es.push_back(r.err[c]);
      bool positive = true;
      for (double e : es) positive = positive && e > 0.0;
      if (positive) report.orders[c] = convergence_orders(es, hs);
    }
  }
  return report;
}

double IterationGap::worst_ratio() const {
  double worst = 0.0;
  for (int c = 0; c < kNumErrorColumns; ++c) worst = std::max(worst, gap[c] / error[c]);
  return worst;
}

IterationGap iteration_gap(ElementPair pair, int level, int short_iters, int long_iters,
                           const MaterialParams& params) {
  if (short_iters < 1 || long_iters < 1) throw std::invalid_argument("iteration_gap: iteration counts must be >= 1");
  const ManufacturedCase mc = case_for_pair(pair, params);
  const Discretization disc = make_discretization(level, pair);
  auto solve = [&](int iters) {
    FhdConfig cfg = mc.config(level, pair);
    cfg.picard_iters = iters;
    cfg.oseen_iters = iters;
    return solve_fhd(disc, cfg);
  };
  const FhdSolution a = solve(short_iters);
  const FhdSolution b = solve(long_iters);
  auto diff = [](const FEField& x, const FEField& y) { return FEField(x.space, x.coeffs - y.coeffs); };
  const ScalarFn zero_s = [](const Vec2&) { return 0.0; };
  const VectorFn zero_v = [](const Vec2&) { return Vec2(Vec2::Zero()); };
  const MatrixFn zero_m = [](const Vec2&) { return Mat2(Mat2::Zero()); };

  IterationGap g;
  g.N = level;
  g.gap[kPhi] = error_h1_semi(diff(a.phi, b.phi), zero_v).absolute;
  g.gap[kH] = error_hcurl(diff(a.H, b.H), zero_v, zero_s).absolute;
  g.gap[kM] = error_l2(diff(a.M, b.M), zero_v).absolute;
  g.gap[kU] = error_h1_broken(diff(a.u, b.u), zero_v, zero_m, kVelocityFullNorm).absolute;
  g.gap[kP] = error_l2(diff(a.p, b.p), zero_s).absolute;

  g.error[kPhi] = error_h1_semi(b.phi, mc.grad_phi).absolute;
  g.error[kH] = error_hcurl(b.H, mc.grad_phi, zero_s).absolute;
  g.error[kM] = error_l2(b.M, [&](const Vec2& x) { return mc.M(x); }).absolute;
  g.error[kU] = error_h1_broken(b.u, mc.u, mc.grad_u, kVelocityFullNorm).absolute;
  g.error[kP] = error_l2(b.p, mc.p).absolute;
  return g;
}

}  // namespace fhd
