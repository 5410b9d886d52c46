#pragma once

#include <string>

#include "fhd/fespace.hpp"

namespace fhd {

enum class SolveStatus { ok, singular, not_converged };

std::string to_string(SolveStatus status);

struct SolveReport {
  double residual_norm = 0.0;  // ||b - A x||_2 after the solve
  double relative_residual = 0.0;
  int factor_or_iter_count = 0;
  SolveStatus status = SolveStatus::ok;

  bool ok() const { return status == SolveStatus::ok; }
};

enum class SolverPath { direct, iterative };

struct SpdResult {
  Vector x;
  SolveReport report;
};

/// Solves A x = b for symmetric positive definite A. The direct path is a
/// sparse Cholesky factorization; the iterative path is conjugate gradients
/// with a diagonal preconditioner. Both target a relative residual <= 1e-10.
SpdResult solve_spd(const SparseMatrix& a, const Vector& b, SolverPath path = SolverPath::direct);

/// Discrete Stokes/Oseen system
///
///   A u - B^T p         = rhs_u
///  -B u         + m lam = -rhs_p
///         m^T p         = 0
///
/// with B_(q,i) = (div v_i, q) and m_q = integral of the pressure basis q.
/// The scalar multiplier lam keeps the system square and pins the pressure
/// mean to zero.
struct SaddleSystem {
  SparseMatrix A;
  SparseMatrix B;
  Vector rhs_u;
  Vector rhs_p;
  Vector mean_constraint;
};

struct SaddleResult {
  Vector u;
  Vector p;
  double multiplier = 0.0;
  SolveReport report;
};

/// Monolithic sparse LU solve of the augmented system. Reports `singular`
/// when the constraint row is missing or the factorization breaks down.
SaddleResult solve_saddle(const SaddleSystem& sys);

/// Rows and columns of `a` restricted to the given index sets.
SparseMatrix submatrix(const SparseMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols);
Vector gather(const Vector& v, const std::vector<int>& idx);
void scatter(const Vector& src, const std::vector<int>& idx, Vector& dst);

}  // namespace fhd
