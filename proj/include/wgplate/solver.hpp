#pragma once

#include "wgplate/assembly.hpp"

#include <string>

namespace wgplate {

enum class SolverMethod
{
  direct,  // sparse Cholesky with fill-reducing ordering
  cg,      // Jacobi-preconditioned conjugate gradients
};

SolverMethod parse_solver_method(const std::string& name);
std::string to_string(SolverMethod method);

struct SolveReport
{
  SolverMethod method = SolverMethod::direct;
  int iterations = 0;           // 0 for direct solves
  double relative_residual = 0;  // ||A x - F|| / ||F||, recomputed after the solve
  double rounding_floor = 0;     // eps || |A| |x| || / ||F||, the best residual double precision allows
  double seconds = 0;
  std::string backend;          // factorization library actually used
};

struct SolveResult
{
  VectorXd x;
  SolveReport report;
};

/// Solves A x = F for a symmetric positive definite A.
/// Throws NotSpdError when the Cholesky factorization breaks down and
/// SolverFailure when CG hits its 20 n iteration cap or the final
/// residual exceeds both 1e-10 and 64 times the rounding floor.
SolveResult solve_spd(const SparseMatrixd& A, const VectorXd& F, SolverMethod method = SolverMethod::direct,
                      double tol = 1e-12);

/// ||A x - F|| / ||F|| (plain ||A x|| when F = 0).
double relative_residual(const SparseMatrixd& A, const VectorXd& x, const VectorXd& F);

/// eps || |A| |x| || / ||F||: residual level set by rounding alone. Thin
/// plates push it above 1e-10 because the shear rows cancel heavily.
double rounding_floor(const SparseMatrixd& A, const VectorXd& x, const VectorXd& F);

/// Smallest Ritz value of a symmetric A after `steps` Lanczos iterations with
/// full reorthogonalization, started from a seeded random vector.
double smallest_ritz_value(const SparseMatrixd& A, int steps = 50, unsigned seed = 1);

/// True when the build links a supernodal Cholesky backend.
bool have_cholmod();

}  // namespace wgplate
