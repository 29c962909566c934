#include "wgplate/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#ifdef WGPLATE_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>
#include <sstream>

namespace wgplate {

SolverMethod parse_solver_method(const std::string& name)
{
  if (name == "direct") return SolverMethod::direct;
  if (name == "cg") return SolverMethod::cg;
  throw InvalidArgument("unknown solver '" + name + "' (expected direct or cg)");
}

std::string to_string(SolverMethod method)
{
  return method == SolverMethod::direct ? "direct" : "cg";
}

bool have_cholmod()
{
#ifdef WGPLATE_HAVE_CHOLMOD
  return true;
#else
  return false;
#endif
}

double relative_residual(const SparseMatrixd& A, const VectorXd& x, const VectorXd& F)
{
  const VectorXd r = A * x - F;
  const double fn = F.norm();
  return fn > 0 ? r.norm() / fn : r.norm();
}

double rounding_floor(const SparseMatrixd& A, const VectorXd& x, const VectorXd& F)
{
  const double fn = F.norm();
  const double ax = (A.cwiseAbs() * x.cwiseAbs()).norm();
  return std::numeric_limits<double>::epsilon() * (fn > 0 ? ax / fn : ax);
}

namespace {

void check_system(const SparseMatrixd& A, const VectorXd& F)
{
  if (A.rows() != A.cols()) throw InvalidArgument("solve_spd: matrix is not square");
  if (A.rows() != F.size()) throw InvalidArgument("solve_spd: right-hand side length does not match the matrix");
}

template<typename Factor>
VectorXd factor_and_solve(Factor& llt, const SparseMatrixd& A, const VectorXd& F, double tol)
{
  llt.compute(A);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "solve_spd: Cholesky factorization failed on a " << A.rows() << " x " << A.cols()
       << " matrix (not positive definite)";
    throw NotSpdError(os.str());
  }
  VectorXd x = llt.solve(F);
  // A few refinement sweeps recover digits lost to the t^-2 shear scaling.
  for (int sweep = 0; sweep < 3 && relative_residual(A, x, F) > tol; ++sweep) x += llt.solve(F - A * x);
  return x;
}

}  // namespace

SolveResult solve_spd(const SparseMatrixd& A, const VectorXd& F, SolverMethod method, double tol)
{
  check_system(A, F);
  const auto start = std::chrono::steady_clock::now();
  SolveResult out;
  out.report.method = method;

  if (A.rows() == 0) {
    out.x = VectorXd::Zero(0);
  } else if (method == SolverMethod::direct) {
#ifdef WGPLATE_HAVE_CHOLMOD
    Eigen::CholmodSupernodalLLT<SparseMatrixd, Eigen::Lower> llt;
    out.report.backend = "cholmod-supernodal";
#else
    Eigen::SimplicialLLT<SparseMatrixd, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
    out.report.backend = "eigen-simplicial";
#endif
    out.x = factor_and_solve(llt, A, F, tol);
  } else {
    Eigen::ConjugateGradient<SparseMatrixd, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
    const Eigen::Index cap = 20 * A.rows();
    cg.setMaxIterations(cap);
    cg.setTolerance(tol);
    cg.compute(A);
    out.x = cg.solve(F);
    out.report.iterations = static_cast<int>(cg.iterations());
    out.report.backend = "eigen-cg-jacobi";
    if (cg.info() != Eigen::Success) {
      std::ostringstream os;
      os << "solve_spd: CG stopped after " << cg.iterations() << " of " << cap
         << " iterations with estimated residual " << cg.error();
      throw SolverFailure(os.str());
    }
  }

  out.report.relative_residual = relative_residual(A, out.x, F);
  out.report.rounding_floor = rounding_floor(A, out.x, F);
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!(out.report.relative_residual <= std::max(1e-10, 64.0 * out.report.rounding_floor))) {
    std::ostringstream os;
    os << "solve_spd: " << to_string(method) << " solve left relative residual " << out.report.relative_residual
       << " (rounding floor " << out.report.rounding_floor << ")";
    throw SolverFailure(os.str());
  }
  return out;
}

double smallest_ritz_value(const SparseMatrixd& A, int steps, unsigned seed)
{
  const Eigen::Index n = A.rows();
  if (n == 0) throw InvalidArgument("smallest_ritz_value: empty matrix");
  const int m = static_cast<int>(std::min<Eigen::Index>(steps, n));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  MatrixXd Q(n, m);
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = unit(rng);
  v.normalize();

  int used = 0;
  for (int j = 0; j < m; ++j) {
    Q.col(j) = v;
    ++used;
    if (j + 1 == m) break;
    VectorXd w = A * v;
    const double scale = w.norm();
    // two Gram-Schmidt passes against the whole basis
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
    const double b = w.norm();
    if (b <= 1e-12 * scale) break;  // invariant subspace found
    v = w / b;
  }

  // Rayleigh-Ritz on the orthonormal Krylov basis.
  const MatrixXd Qu = Q.leftCols(used);
  const MatrixXd T = Qu.transpose() * (A * Qu);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(T, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()[0];
}

}  // namespace wgplate
