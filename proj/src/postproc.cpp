#include "wgplate/postproc.hpp"

#include "wgplate/poly.hpp"
#include "wgplate/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace wgplate {

namespace {

int data_degree(int data, int basis)
{
  return data >= 0 ? data + basis : basis + 8;
}

VectorXd gather(const VectorXd& dofs, const std::vector<int>& idx, int offset, int count)
{
  VectorXd out(count);
  for (int i = 0; i < count; ++i) out[i] = dofs[idx[offset + i]];
  return out;
}

void check_length(const Discretization& disc, const VectorXd& dofs, const char* who)
{
  if (dofs.size() != disc.dofs.size())
    throw InvalidArgument(std::string(who) + ": DOF vector length does not match the discretization");
}

// Local w block and theta block of one cell.
struct LocalValues
{
  VectorXd w, theta;
};

LocalValues local_values(const Discretization& disc, const VectorXd& dofs, int c)
{
  const auto idx = disc.dofs.cell_dofs(*disc.mesh, c);
  const auto& lay = disc.ops[c].layout;
  return {gather(dofs, idx, 0, lay.n_w()), gather(dofs, idx, lay.n_w(), lay.n_theta())};
}

// h_T ||v_b||^2 over the boundary of a cell, one scalar edge field per
// component; edge bases are Legendre so the Gram matrix is diagonal.
double edge_l2_sq(const Mesh& mesh, int c, const VectorXd& local, int first, int dim, int n_comp)
{
  const auto& loop = mesh.cell_edges(c);
  double sum = 0;
  for (std::size_t e = 0; e < loop.size(); ++e) {
    const EdgeBasis eb(mesh, loop[e].edge, dim - 1);
    const VectorXd gram = eb.gram_diagonal();
    for (int a = 0; a < n_comp; ++a) {
      const auto v = local.segment(first + (static_cast<int>(e) * n_comp + a) * dim, dim);
      sum += v.cwiseAbs2().dot(gram);
    }
  }
  return mesh.cell(c).diameter * sum;
}

}  // namespace

VectorXd project_exact(const Discretization& disc, const Problem& problem)
{
  const Mesh& mesh = *disc.mesh;
  const auto& cfg = disc.config;
  const auto& dm = disc.dofs;
  VectorXd x = VectorXd::Zero(dm.size());
  const int cell_w = std::min(max_triangle_degree, data_degree(problem.w_degree, cfg.k));
  const int cell_t = std::min(max_triangle_degree, data_degree(problem.theta_degree, cfg.q));
  const int edge_w = std::min(2 * max_gauss_points - 1, data_degree(problem.w_degree, cfg.p));
  const int edge_t = std::min(2 * max_gauss_points - 1, data_degree(problem.theta_degree, cfg.m));
  const int dq = poly_dim(cfg.q), dm1 = cfg.m + 1;

  for (int c = 0; c < mesh.n_cells(); ++c) {
    x.segment(dm.w_cell(c), poly_dim(cfg.k)) = l2_project_cell(mesh, c, problem.w, cfg.k, cell_w).coeffs;
    for (int a = 0; a < 2; ++a) {
      auto comp = [&](const Point2d& p) { return problem.theta(p)[a]; };
      x.segment(dm.theta_cell(c) + a * dq, dq) = l2_project_cell(mesh, c, comp, cfg.q, cell_t).coeffs;
    }
  }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    x.segment(dm.w_edge(e), cfg.p + 1) = l2_project_edge(mesh, e, problem.w, cfg.p, edge_w).coeffs;
    for (int a = 0; a < 2; ++a) {
      auto comp = [&](const Point2d& p) { return problem.theta(p)[a]; };
      x.segment(dm.theta_edge(e) + a * dm1, dm1) = l2_project_edge(mesh, e, comp, cfg.m, edge_t).coeffs;
    }
  }
  return x;
}

double energy_norm_w(const Discretization& disc, const VectorXd& dofs)
{
  check_length(disc, dofs, "energy_norm_w");
  double sum = 0;
  for (int c = 0; c < disc.mesh->n_cells(); ++c) {
    const auto& ops = disc.ops[c];
    const VectorXd g = ops.G * local_values(disc, dofs, c).w;
    sum += g.dot(vector_mass(ops.mass_r1) * g);
  }
  return std::sqrt(std::max(0.0, sum));
}

double energy_norm_theta(const Discretization& disc, const VectorXd& dofs)
{
  check_length(disc, dofs, "energy_norm_theta");
  double sum = 0;
  for (int c = 0; c < disc.mesh->n_cells(); ++c) {
    const auto& ops = disc.ops[c];
    const VectorXd e = ops.E * local_values(disc, dofs, c).theta;
    sum += e.dot(voigt_mass(ops.mass_r2) * e);
  }
  return std::sqrt(std::max(0.0, sum));
}

double l2_norm_w(const Discretization& disc, const VectorXd& dofs, L2Mode mode)
{
  check_length(disc, dofs, "l2_norm_w");
  double sum = 0;
  for (int c = 0; c < disc.mesh->n_cells(); ++c) {
    const auto& ops = disc.ops[c];
    const VectorXd w = local_values(disc, dofs, c).w;
    const auto w0 = w.head(ops.layout.dim_k);
    sum += w0.dot(ops.mass_k * w0);
    if (mode == L2Mode::with_edges) sum += edge_l2_sq(*disc.mesh, c, w, ops.layout.dim_k, ops.layout.dim_p, 1);
  }
  return std::sqrt(std::max(0.0, sum));
}

double l2_norm_theta(const Discretization& disc, const VectorXd& dofs, L2Mode mode)
{
  check_length(disc, dofs, "l2_norm_theta");
  double sum = 0;
  for (int c = 0; c < disc.mesh->n_cells(); ++c) {
    const auto& ops = disc.ops[c];
    const VectorXd th = local_values(disc, dofs, c).theta;
    const int dq = ops.layout.dim_q;
    for (int a = 0; a < 2; ++a) {
      const auto t0 = th.segment(a * dq, dq);
      sum += t0.dot(ops.mass_q * t0);
    }
    if (mode == L2Mode::with_edges) sum += edge_l2_sq(*disc.mesh, c, th, 2 * dq, ops.layout.dim_m, 2);
  }
  return std::sqrt(std::max(0.0, sum));
}

double shear_error(const Discretization& disc, const VectorXd& dofs, const Problem& problem,
                   const PlateParams& params)
{
  check_length(disc, dofs, "shear_error");
  const Mesh& mesh = *disc.mesh;
  const int r1 = disc.config.r1;
  const int exact_deg = problem.theta_degree >= 0 ? std::max(problem.theta_degree, problem.w_degree - 1) : r1 + 8;
  const int qdeg = std::min(max_triangle_degree, 2 * std::max(exact_deg, r1));
  const double factor = params.shear_factor();
  double sum = 0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& ops = disc.ops[c];
    const LocalValues v = local_values(disc, dofs, c);
    const VectorXd gh = factor * (ops.G * v.w - ops.Pint * v.theta);
    const CellBasis basis(mesh, c, r1);
    const int d1 = basis.dim();
    const QuadratureRule rule = cell_rule(mesh, c, qdeg);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const VectorXd phi = basis.values(rule.points[q]);
      const Point2d diff = problem.shear(rule.points[q]) - Point2d(phi.dot(gh.head(d1)), phi.dot(gh.tail(d1)));
      sum += rule.weights[q] * diff.squaredNorm();
    }
  }
  return params.t / std::sqrt(params.lambda()) * std::sqrt(std::max(0.0, sum));
}

double ErrorRow::error(int i) const
{
  switch (i) {
    case 0: return errL2_w;
    case 1: return errE_w;
    case 2: return errL2_theta;
    case 3: return errE_theta;
    case 4: return err_shear;
    default: throw InvalidArgument("ErrorRow::error: column index out of range");
  }
}

ErrorRow compute_errors(const Discretization& disc, const VectorXd& solution, const Problem& problem,
                        const PlateParams& params, L2Mode mode)
{
  const VectorXd diff = project_exact(disc, problem) - solution;
  ErrorRow row;
  row.h = disc.mesh->h_max();
  row.errL2_w = l2_norm_w(disc, diff, mode);
  row.errE_w = energy_norm_w(disc, diff);
  row.errL2_theta = l2_norm_theta(disc, diff, mode);
  row.errE_theta = energy_norm_theta(disc, diff);
  row.err_shear = shear_error(disc, solution, problem, params);
  return row;
}

std::optional<double> convergence_order(double e_prev, double e, double h_prev, double h)
{
  if (!(e_prev > 0) || !(e > 0) || !(h_prev > 0) || !(h > 0) || h_prev == h) return std::nullopt;
  return std::log(e_prev / e) / std::log(h_prev / h);
}

void convergence_orders(std::vector<ErrorRow>& rows)
{
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < ErrorRow::n_errors; ++j)
      rows[i].order[j] =
          i == 0 ? std::nullopt
                 : convergence_order(rows[i - 1].error(j), rows[i].error(j), rows[i - 1].h, rows[i].h);
}

}  // namespace wgplate
