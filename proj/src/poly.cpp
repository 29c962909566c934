#include "wgplate/poly.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace wgplate {

CellBasis::CellBasis(Point2d center, double scale, int degree)
    : center_(std::move(center)), scale_(scale), degree_(degree)
{
  if (degree < 0) throw InvalidArgument("CellBasis: negative degree");
  if (!(scale > 0)) throw InvalidArgument("CellBasis: scale must be positive");
  exps_.reserve(poly_dim(degree));
  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d; ++b) exps_.emplace_back(d - b, b);
}

CellBasis::CellBasis(const Mesh& mesh, int cell, int degree)
    : CellBasis(mesh.cell(cell).centroid, mesh.cell(cell).diameter, degree)
{}

VectorXd CellBasis::values(const Point2d& x) const
{
  const double u = (x.x() - center_.x()) / scale_;
  const double v = (x.y() - center_.y()) / scale_;
  VectorXd pu(degree_ + 1), pv(degree_ + 1);
  pu[0] = pv[0] = 1.0;
  for (int i = 1; i <= degree_; ++i) {
    pu[i] = pu[i - 1] * u;
    pv[i] = pv[i - 1] * v;
  }
  VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = pu[exps_[i].first] * pv[exps_[i].second];
  return out;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> CellBasis::gradients(const Point2d& x) const
{
  const double u = (x.x() - center_.x()) / scale_;
  const double v = (x.y() - center_.y()) / scale_;
  VectorXd pu(degree_ + 1), pv(degree_ + 1);
  pu[0] = pv[0] = 1.0;
  for (int i = 1; i <= degree_; ++i) {
    pu[i] = pu[i - 1] * u;
    pv[i] = pv[i - 1] * v;
  }
  Eigen::Matrix<double, Eigen::Dynamic, 2> g(dim(), 2);
  for (int i = 0; i < dim(); ++i) {
    const auto [a, b] = exps_[i];
    g(i, 0) = a > 0 ? a * pu[a - 1] * pv[b] / scale_ : 0.0;
    g(i, 1) = b > 0 ? b * pu[a] * pv[b - 1] / scale_ : 0.0;
  }
  return g;
}

// ---------------------------------------------------------------------------

EdgeBasis::EdgeBasis(Point2d start, Point2d end, int degree)
    : start_(std::move(start)), end_(std::move(end)), degree_(degree)
{
  if (degree < 0) throw InvalidArgument("EdgeBasis: negative degree");
}

EdgeBasis::EdgeBasis(const Mesh& mesh, int edge, int degree)
    : EdgeBasis(mesh.vertex(mesh.edge(edge).endpoints[0]), mesh.vertex(mesh.edge(edge).endpoints[1]), degree)
{}

VectorXd EdgeBasis::values_at(double s) const
{
  const double x = 2.0 * s - 1.0;
  VectorXd out(dim());
  out[0] = 1.0;
  if (degree_ >= 1) out[1] = x;
  for (int k = 2; k <= degree_; ++k) out[k] = ((2.0 * k - 1.0) * x * out[k - 1] - (k - 1.0) * out[k - 2]) / k;
  return out;
}

VectorXd EdgeBasis::gram_diagonal() const
{
  VectorXd d(dim());
  const double len = length();
  for (int i = 0; i < dim(); ++i) d[i] = len / (2.0 * i + 1.0);
  return d;
}

// ---------------------------------------------------------------------------

SpdFactor::SpdFactor(const MatrixXd& matrix, std::string what) : matrix_(matrix), what_(std::move(what))
{
  if ((matrix_.diagonal().array() <= 0.0).any())
    throw ConditioningError(what_ + ": matrix is not positive definite");
  // Jacobi equilibration: monomials of different degree have norms spread over
  // several decades, and rescaling them to unit norm is most of what conditions
  // the system.
  scale_ = matrix_.diagonal().cwiseSqrt().cwiseInverse();
  llt_.compute(scale_.asDiagonal() * matrix_ * scale_.asDiagonal());
  if (llt_.info() != Eigen::Success) throw ConditioningError(what_ + ": matrix is not positive definite");
  const double rc = llt_.rcond();
  condition_ = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (condition_ > max_condition) {
    std::ostringstream msg;
    msg << what_ << ": condition estimate " << condition_ << " exceeds " << max_condition;
    throw ConditioningError(msg.str());
  }
}

MatrixXd SpdFactor::solve_scaled(const MatrixXd& rhs) const
{
  return scale_.asDiagonal() * llt_.solve(scale_.asDiagonal() * rhs);
}

MatrixXd SpdFactor::solve(const MatrixXd& rhs) const
{
  MatrixXd x = solve_scaled(rhs);
  MatrixXd r = rhs - matrix_ * x;
  x += solve_scaled(r);
  r = rhs - matrix_ * x;
  const double mnorm = matrix_.norm();
  for (Eigen::Index j = 0; j < rhs.cols(); ++j) {
    const double scale = std::max(rhs.col(j).norm(), mnorm * x.col(j).norm());
    if (scale > 0 && r.col(j).norm() > residual_tol * scale) {
      std::ostringstream msg;
      msg << what_ << ": local solve residual " << r.col(j).norm() / scale << " exceeds " << residual_tol;
      throw ConditioningError(msg.str());
    }
  }
  return x;
}

// ---------------------------------------------------------------------------

MatrixXd mass_matrix(const CellBasis& basis, const QuadratureRule& rule)
{
  MatrixXd m = MatrixXd::Zero(basis.dim(), basis.dim());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const VectorXd v = basis.values(rule.points[q]);
    m.selfadjointView<Eigen::Lower>().rankUpdate(v, rule.weights[q]);
  }
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return m;
}

MatrixXd mass_matrix(const Mesh& mesh, int cell, int r)
{
  if (r < 0) throw InvalidArgument("mass_matrix: negative degree");
  return mass_matrix(CellBasis(mesh, cell, r), cell_rule(mesh, cell, 2 * r));
}

MatrixXd mixed_mass_matrix(const CellBasis& rows, const CellBasis& cols, const QuadratureRule& rule)
{
  MatrixXd m = MatrixXd::Zero(rows.dim(), cols.dim());
  for (std::size_t q = 0; q < rule.size(); ++q)
    m.noalias() += rule.weights[q] * rows.values(rule.points[q]) * cols.values(rule.points[q]).transpose();
  return m;
}

}  // namespace wgplate
