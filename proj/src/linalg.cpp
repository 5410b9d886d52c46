#include "fhd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace fhd {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

SolveReport make_report(const SparseMatrix& a, const Vector& x, const Vector& b, int count,
                        double tolerance) {
  SolveReport r;
  r.residual_norm = (b - a * x).norm();
  const double scale = b.norm();
  r.relative_residual = scale > 0.0 ? r.residual_norm / scale : r.residual_norm;
  r.factor_or_iter_count = count;
  if (!std::isfinite(r.residual_norm)) {
    r.status = SolveStatus::singular;
  } else if (r.relative_residual > tolerance) {
    r.status = SolveStatus::not_converged;
  }
  return r;
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::ok: return "ok";
    case SolveStatus::singular: return "singular";
    case SolveStatus::not_converged: return "not_converged";
  }
  return "unknown";
}

SpdResult solve_spd(const SparseMatrix& a, const Vector& b, SolverPath path) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw std::invalid_argument("solve_spd: dimension mismatch");
  }
  SpdResult out;
  if (a.rows() == 0) {
    out.x = Vector(0);
    return out;
  }
  const ColMatrix ac = a;
  if (path == SolverPath::direct) {
    Eigen::SimplicialLLT<ColMatrix> llt(ac);
    if (llt.info() != Eigen::Success) {
      out.x = Vector::Zero(b.size());
      out.report.status = SolveStatus::singular;
      out.report.residual_norm = b.norm();
      out.report.relative_residual = 1.0;
      return out;
    }
    out.x = llt.solve(b);
    out.report = make_report(a, out.x, b, 1, 1e-10);
  } else {
    Eigen::ConjugateGradient<ColMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-12);
    cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * a.rows()));
    cg.compute(ac);
    out.x = cg.solve(b);
    out.report = make_report(a, out.x, b, static_cast<int>(cg.iterations()), 1e-10);
    if (cg.info() == Eigen::NumericalIssue) out.report.status = SolveStatus::singular;
  }
  return out;
}

SaddleResult solve_saddle(const SaddleSystem& sys) {
  const Eigen::Index nu = sys.A.rows();
  const Eigen::Index np = sys.B.rows();
  if (sys.A.cols() != nu || sys.B.cols() != nu || sys.rhs_u.size() != nu || sys.rhs_p.size() != np) {
    throw std::invalid_argument("solve_saddle: block dimensions are inconsistent");
  }
  SaddleResult out;
  auto fail = [&] {
    out.u = Vector::Zero(nu);
    out.p = Vector::Zero(np);
    out.report.status = SolveStatus::singular;
    out.report.relative_residual = 1.0;
    return out;
  };
  const double m_total = sys.mean_constraint.size() == np ? sys.mean_constraint.sum() : 0.0;
  if (np == 0 || sys.mean_constraint.size() != np || m_total == 0.0) return fail();

  const Eigen::Index n = nu + np + 1;
  const Vector ones = Vector::Ones(np);
  const Vector col_sums = sys.B.transpose() * ones;
  const double b_scale = std::max(1.0, sys.B.coeffs().cwiseAbs().maxCoeff());
  // Constants in ker B^T: the multiplier is known up front and one pressure
  // dof can be pinned, which keeps the dense mean row out of the factorization.
  const bool pin = col_sums.lpNorm<Eigen::Infinity>() <= 1e-12 * b_scale;
  const Eigen::Index pinned = np - 1;

  std::vector<Eigen::Triplet<double>> full;
  std::vector<Eigen::Triplet<double>> reduced;
  full.reserve(static_cast<std::size_t>(sys.A.nonZeros() + 2 * sys.B.nonZeros() + 2 * np));
  for (Eigen::Index r = 0; r < nu; ++r) {
    for (SparseMatrix::InnerIterator it(sys.A, r); it; ++it) full.emplace_back(r, it.col(), it.value());
  }
  if (pin) reduced = full;
  for (Eigen::Index q = 0; q < np; ++q) {
    for (SparseMatrix::InnerIterator it(sys.B, q); it; ++it) {
      full.emplace_back(it.col(), nu + q, -it.value());
      full.emplace_back(nu + q, it.col(), -it.value());
      if (pin && q != pinned) {
        reduced.emplace_back(it.col(), nu + q, -it.value());
        reduced.emplace_back(nu + q, it.col(), -it.value());
      }
    }
    full.emplace_back(nu + q, n - 1, sys.mean_constraint[q]);
    full.emplace_back(n - 1, nu + q, sys.mean_constraint[q]);
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(full.begin(), full.end());
  Vector rhs(n);
  rhs << sys.rhs_u, -sys.rhs_p, 0.0;

  Vector x(n);
  if (pin) {
    const double lambda = -sys.rhs_p.sum() / m_total;
    const Eigen::Index nr = nu + np - 1;
    ColMatrix kr(nr, nr);
    kr.setFromTriplets(reduced.begin(), reduced.end());
    Vector br(nr);
    br.head(nu) = sys.rhs_u;
    br.tail(np - 1) = -sys.rhs_p.head(np - 1) - lambda * sys.mean_constraint.head(np - 1);
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(kr);
    if (lu.info() != Eigen::Success) return fail();
    Vector xr = lu.solve(br);
    xr += lu.solve(Vector(br - kr * xr));
    x.head(nu) = xr.head(nu);
    Vector p(np);
    p.head(np - 1) = xr.tail(np - 1);
    p[pinned] = 0.0;
    p.array() -= sys.mean_constraint.dot(p) / m_total;
    x.segment(nu, np) = p;
    x[n - 1] = lambda;
  } else {
    const ColMatrix kc = k;
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(kc);
    if (lu.info() != Eigen::Success) return fail();
    x = lu.solve(rhs);
    x += lu.solve(Vector(rhs - k * x));
  }
  out.u = x.head(nu);
  out.p = x.segment(nu, np);
  out.multiplier = x[n - 1];
  out.report = make_report(k, x, rhs, 1, 1e-9);
  return out;
}

SparseMatrix submatrix(const SparseMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> col_pos(static_cast<std::size_t>(a.cols()), -1);
  for (std::size_t j = 0; j < cols.size(); ++j) col_pos[cols[j]] = static_cast<int>(j);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (SparseMatrix::InnerIterator it(a, rows[i]); it; ++it) {
      const int j = col_pos[it.col()];
      if (j >= 0) trip.emplace_back(static_cast<int>(i), j, it.value());
    }
  }
  SparseMatrix s(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

Vector gather(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[idx[i]];
  return out;
}

void scatter(const Vector& src, const std::vector<int>& idx, Vector& dst) {
  for (std::size_t i = 0; i < idx.size(); ++i) dst[idx[i]] = src[static_cast<Eigen::Index>(i)];
}

}  // namespace fhd
