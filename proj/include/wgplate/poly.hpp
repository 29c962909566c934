#pragma once

#include "wgplate/mesh.hpp"
#include "wgplate/quadrature.hpp"
#include "wgplate/types.hpp"

#include <Eigen/Cholesky>

#include <string>
#include <utility>
#include <vector>

namespace wgplate {

/// dim P_r in two variables.
constexpr int poly_dim(int r) { return r < 0 ? 0 : (r + 1) * (r + 2) / 2; }

/// Scaled monomials ((x - xc)/h)^a ((y - yc)/h)^b, a + b <= degree, in
/// graded-lex order: 1, x, y, x^2, xy, y^2, ...
class CellBasis
{
public:
  CellBasis(Point2d center, double scale, int degree);
  CellBasis(const Mesh& mesh, int cell, int degree);

  int degree() const { return degree_; }
  int dim() const { return poly_dim(degree_); }
  const Point2d& center() const { return center_; }
  double scale() const { return scale_; }
  const std::pair<int, int>& exponents(int i) const { return exps_[i]; }
  /// Position of x^a y^b in the ordering.
  static int index(int a, int b) { return poly_dim(a + b - 1) + b; }

  VectorXd values(const Point2d& x) const;
  /// Row i holds the physical gradient of basis function i.
  Eigen::Matrix<double, Eigen::Dynamic, 2> gradients(const Point2d& x) const;

  /// Evaluates sum_i coeffs[i] phi_i(x).
  double eval(const VectorXd& coeffs, const Point2d& x) const { return values(x).dot(coeffs); }

private:
  Point2d center_;
  double scale_;
  int degree_;
  std::vector<std::pair<int, int>> exps_;
};

/// Shifted Legendre polynomials L_i(2s - 1), i <= degree, in the arc
/// parameter s in [0, 1] running from the lower to the higher vertex index.
class EdgeBasis
{
public:
  EdgeBasis(Point2d start, Point2d end, int degree);
  EdgeBasis(const Mesh& mesh, int edge, int degree);

  int degree() const { return degree_; }
  int dim() const { return degree_ + 1; }
  double length() const { return (end_ - start_).norm(); }
  const Point2d& start() const { return start_; }
  const Point2d& end() const { return end_; }
  Point2d point(double s) const { return start_ + s * (end_ - start_); }

  VectorXd values_at(double s) const;
  /// Diagonal of the Gram matrix, L / (2i + 1).
  VectorXd gram_diagonal() const;

private:
  Point2d start_, end_;
  int degree_;
};

/// Dense SPD factorization with a conditioning guard. The matrix is
/// equilibrated to unit diagonal before factoring; the condition estimate
/// refers to that equilibrated matrix. Solves are verified to a relative
/// residual of 1e-12 after one refinement step.
class SpdFactor
{
public:
  static constexpr double max_condition = 1e14;
  static constexpr double residual_tol = 1e-12;

  SpdFactor() = default;
  /// `what` names the object in diagnostics (e.g. "cell 12 mass P_3").
  SpdFactor(const MatrixXd& matrix, std::string what);

  MatrixXd solve(const MatrixXd& rhs) const;
  double condition_estimate() const { return condition_; }
  const MatrixXd& matrix() const { return matrix_; }

private:
  MatrixXd solve_scaled(const MatrixXd& rhs) const;

  MatrixXd matrix_;
  VectorXd scale_;
  Eigen::LLT<MatrixXd> llt_;
  double condition_ = 0.0;
  std::string what_;
};

/// M_ij = int_T phi_i phi_j.
MatrixXd mass_matrix(const CellBasis& basis, const QuadratureRule& rule);
MatrixXd mass_matrix(const Mesh& mesh, int cell, int r);

/// int_T phi_i psi_j for two bases on the same cell.
MatrixXd mixed_mass_matrix(const CellBasis& rows, const CellBasis& cols, const QuadratureRule& rule);

struct Projection
{
  VectorXd coeffs;
};

/// Q_r f on a cell: solves M c = (f, phi_i)_T.
template<typename F>
Projection l2_project_cell(const Mesh& mesh, int cell, F&& f, int r, int quad_degree = -1);

/// Q_p f on an edge, in the EdgeBasis of that edge.
template<typename F>
Projection l2_project_edge(const Mesh& mesh, int edge, F&& f, int p, int quad_degree = -1);

// ---------------------------------------------------------------------------

template<typename F>
Projection l2_project_cell(const Mesh& mesh, int cell, F&& f, int r, int quad_degree)
{
  const CellBasis basis(mesh, cell, r);
  const int deg = quad_degree >= 0 ? quad_degree : std::min(max_triangle_degree, 2 * r + 8);
  const QuadratureRule rule = cell_rule(mesh, cell, deg);
  const MatrixXd mass = mass_matrix(basis, cell_rule(mesh, cell, 2 * r));
  VectorXd rhs = VectorXd::Zero(basis.dim());
  for (std::size_t q = 0; q < rule.size(); ++q)
    rhs += rule.weights[q] * f(rule.points[q]) * basis.values(rule.points[q]);
  const SpdFactor factor(mass, "cell " + std::to_string(cell) + " mass P_" + std::to_string(r));
  return {factor.solve(rhs)};
}

template<typename F>
Projection l2_project_edge(const Mesh& mesh, int edge, F&& f, int p, int quad_degree)
{
  const EdgeBasis basis(mesh, edge, p);
  const LineRule rule = line_rule(quad_degree >= 0 ? quad_degree : 2 * p + 8);
  VectorXd rhs = VectorXd::Zero(basis.dim());
  const double len = basis.length();
  for (std::size_t q = 0; q < rule.size(); ++q)
    rhs += len * rule.weights[q] * f(basis.point(rule.points[q])) * basis.values_at(rule.points[q]);
  return {rhs.cwiseQuotient(basis.gram_diagonal())};
}

}  // namespace wgplate
