#include "wgplate/assembly.hpp"

#include "wgplate/poly.hpp"
#include "wgplate/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace wgplate {

DofMap::DofMap(const Mesh& mesh, const WeakSpaceConfig& config)
    : n_cells_(mesh.n_cells()),
      dim_k_(poly_dim(config.k)),
      dim_p_(config.p + 1),
      dim_q_(poly_dim(config.q)),
      dim_m_(config.m + 1)
{
  n_w_ = n_cells_ * dim_k_ + mesh.n_edges() * dim_p_;
  n_theta_ = 2 * (n_cells_ * dim_q_ + mesh.n_edges() * dim_m_);
  for (int e : mesh.boundary_edges())
    for (int i = 0; i < dim_p_; ++i) constrained_.push_back(w_edge(e) + i);
  for (int e : mesh.boundary_edges())
    for (int i = 0; i < 2 * dim_m_; ++i) constrained_.push_back(theta_edge(e) + i);
  std::sort(constrained_.begin(), constrained_.end());
}

std::vector<int> DofMap::cell_dofs(const Mesh& mesh, int cell) const
{
  const auto& loop = mesh.cell_edges(cell);
  std::vector<int> out;
  out.reserve(dim_k_ + loop.size() * dim_p_ + 2 * dim_q_ + loop.size() * 2 * dim_m_);
  for (int i = 0; i < dim_k_; ++i) out.push_back(w_cell(cell) + i);
  for (const auto& ce : loop)
    for (int i = 0; i < dim_p_; ++i) out.push_back(w_edge(ce.edge) + i);
  for (int i = 0; i < 2 * dim_q_; ++i) out.push_back(theta_cell(cell) + i);
  for (const auto& ce : loop)
    for (int i = 0; i < 2 * dim_m_; ++i) out.push_back(theta_edge(ce.edge) + i);
  return out;
}

// ---------------------------------------------------------------------------

int default_thread_count()
{
  if (const char* env = std::getenv("WG_PLATE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for_cells(int n_cells, int threads, const std::function<void(int)>& body)
{
  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, std::max(1, n_cells));
  if (threads == 1) {
    for (int c = 0; c < n_cells; ++c) body(c);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int c = next++; c < n_cells; c = next++) {
        try {
          body(c);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n_cells;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Discretization discretize(const Mesh& mesh, const WeakSpaceConfig& config, int threads)
{
  Discretization disc;
  disc.mesh = &mesh;
  disc.config = config;
  disc.dofs = DofMap(mesh, config);
  disc.ops.resize(mesh.n_cells());
  parallel_for_cells(mesh.n_cells(), threads, [&](int c) { disc.ops[c] = build_local_operators(mesh, c, config); });
  return disc;
}

MatrixXd local_stiffness(const LocalOperators& ops, const PlateParams& params)
{
  const int n_w = ops.layout.n_w(), n_t = ops.layout.n_theta();
  if (ops.G.cols() != n_w || ops.E.cols() != n_t || ops.Pint.cols() != n_t || ops.S.rows() != n_w ||
      ops.Pint.rows() != ops.G.rows())
    throw InternalError("local_stiffness: operator dimensions do not match the local layout");

  const int n = n_w + n_t;
  // shear: [G | -Pint]
  MatrixXd shear_map(ops.G.rows(), n);
  shear_map << ops.G, -ops.Pint;
  const MatrixXd m1 = vector_mass(ops.mass_r1);

  const Eigen::Matrix3d c = bending_voigt_matrix(params);
  const auto d2 = ops.mass_r2.rows();
  MatrixXd mc(3 * d2, 3 * d2);
  // energy weights: C in Voigt form times diag(1, 1, 2) for the shear entry
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) mc.block(a * d2, b * d2, d2, d2) = (c(a, b) * (a == 2 ? 2.0 : 1.0)) * ops.mass_r2;

  MatrixXd k = MatrixXd::Zero(n, n);
  k.topLeftCorner(n_w, n_w) = ops.S;
  k.noalias() += params.shear_factor() * (shear_map.transpose() * m1 * shear_map);
  k.bottomRightCorner(n_t, n_t).noalias() += ops.E.transpose() * mc * ops.E;
  k.triangularView<Eigen::StrictlyUpper>() = k.transpose();
  return k;
}

namespace {

int load_quadrature_degree(const WeakSpaceConfig& cfg, const Problem& problem)
{
  const int data = problem.load_degree >= 0 ? problem.load_degree : cfg.k + 8;
  return std::min(max_triangle_degree, cfg.k + data);
}

}  // namespace

GlobalSystem assemble_system(const Discretization& disc, const Problem& problem, const PlateParams& params,
                             int threads)
{
  const Mesh& mesh = *disc.mesh;
  const int qdeg = load_quadrature_degree(disc.config, problem);

  struct CellContribution
  {
    MatrixXd K;
    VectorXd f;  // load on w interior DOFs
  };
  std::vector<CellContribution> local(mesh.n_cells());
  parallel_for_cells(mesh.n_cells(), threads, [&](int c) {
    local[c].K = local_stiffness(disc.ops[c], params);
    const CellBasis basis(mesh, c, disc.config.k);
    const QuadratureRule rule = cell_rule(mesh, c, qdeg);
    VectorXd f = VectorXd::Zero(basis.dim());
    for (std::size_t q = 0; q < rule.size(); ++q)
      f += rule.weights[q] * problem.load(rule.points[q]) * basis.values(rule.points[q]);
    local[c].f = std::move(f);
  });

  // Serial scatter in cell order keeps the summation order, and hence the
  // matrix bits, independent of the worker count.
  GlobalSystem sys;
  sys.dofs = disc.dofs;
  sys.F = VectorXd::Zero(disc.dofs.size());
  std::vector<Eigen::Triplet<double>> triplets;
  std::size_t reserve = 0;
  for (const auto& l : local) reserve += static_cast<std::size_t>(l.K.size());
  triplets.reserve(reserve);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto dofs = disc.dofs.cell_dofs(mesh, c);
    const MatrixXd& K = local[c].K;
    for (int j = 0; j < K.cols(); ++j)
      for (int i = 0; i < K.rows(); ++i)
        if (K(i, j) != 0.0) triplets.emplace_back(dofs[i], dofs[j], K(i, j));
    for (int i = 0; i < local[c].f.size(); ++i) sys.F[disc.dofs.w_cell(c) + i] += local[c].f[i];
  }
  sys.A.resize(disc.dofs.size(), disc.dofs.size());
  sys.A.setFromTriplets(triplets.begin(), triplets.end());
  sys.A.makeCompressed();
  return sys;
}

GlobalSystem assemble_system(const Mesh& mesh, const WeakSpaceConfig& config, const Problem& problem,
                             const PlateParams& params)
{
  const Discretization disc = discretize(mesh, config);
  return assemble_system(disc, problem, params);
}

VectorXd boundary_values(const Discretization& disc, const Problem& problem, BoundaryData mode)
{
  const Mesh& mesh = *disc.mesh;
  VectorXd x = VectorXd::Zero(disc.dofs.size());
  if (mode == BoundaryData::zero) return x;
  const auto& cfg = disc.config;
  const int wdeg = problem.w_degree >= 0 ? std::min(cfg.p + problem.w_degree, 2 * max_gauss_points - 1) : 2 * cfg.p + 8;
  const int tdeg =
      problem.theta_degree >= 0 ? std::min(cfg.m + problem.theta_degree, 2 * max_gauss_points - 1) : 2 * cfg.m + 8;
  for (int e : mesh.boundary_edges()) {
    x.segment(disc.dofs.w_edge(e), cfg.p + 1) = l2_project_edge(mesh, e, problem.w, cfg.p, wdeg).coeffs;
    for (int a = 0; a < 2; ++a) {
      auto comp = [&](const Point2d& p) { return problem.theta(p)[a]; };
      x.segment(disc.dofs.theta_edge(e) + a * (cfg.m + 1), cfg.m + 1) =
          l2_project_edge(mesh, e, comp, cfg.m, tdeg).coeffs;
    }
  }
  return x;
}

VectorXd ReducedSystem::expand(const VectorXd& reduced) const
{
  VectorXd full = constrained_values;
  for (std::size_t i = 0; i < free_dofs.size(); ++i) full[free_dofs[i]] = reduced[static_cast<Eigen::Index>(i)];
  return full;
}

ReducedSystem apply_essential_bc(const GlobalSystem& system, const VectorXd& constrained_values)
{
  const int n = system.dofs.size();
  if (constrained_values.size() != n) throw InternalError("apply_essential_bc: boundary vector has wrong length");
  std::vector<int> reduced_index(n, -1);
  ReducedSystem red;
  red.constrained_values = VectorXd::Zero(n);
  {
    std::vector<char> is_fixed(n, 0);
    for (int d : system.dofs.constrained()) {
      is_fixed[d] = 1;
      red.constrained_values[d] = constrained_values[d];
    }
    for (int i = 0; i < n; ++i)
      if (!is_fixed[i]) {
        reduced_index[i] = static_cast<int>(red.free_dofs.size());
        red.free_dofs.push_back(i);
      }
  }
  const int nf = static_cast<int>(red.free_dofs.size());
  red.F.resize(nf);
  for (int i = 0; i < nf; ++i) red.F[i] = system.F[red.free_dofs[i]];

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(system.A.nonZeros());
  for (int col = 0; col < system.A.outerSize(); ++col) {
    const int rc = reduced_index[col];
    for (SparseMatrixd::InnerIterator it(system.A, col); it; ++it) {
      const int rr = reduced_index[it.row()];
      if (rr < 0) continue;
      if (rc >= 0)
        triplets.emplace_back(rr, rc, it.value());
      else
        red.F[rr] -= it.value() * red.constrained_values[col];
    }
  }
  red.A.resize(nf, nf);
  red.A.setFromTriplets(triplets.begin(), triplets.end());
  red.A.makeCompressed();
  return red;
}

ReducedSystem apply_essential_bc(const GlobalSystem& system, const Discretization& disc, const Problem& problem,
                                 BoundaryData mode)
{
  return apply_essential_bc(system, boundary_values(disc, problem, mode));
}

void write_matrix_lower(std::ostream& os, const SparseMatrixd& A)
{
  const auto old_precision = os.precision(17);
  // row-major traversal of the lower triangle
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rows(A);
  for (int r = 0; r < rows.outerSize(); ++r)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it)
      if (it.col() <= r) os << r << ' ' << it.col() << ' ' << it.value() << '\n';
  os.precision(old_precision);
}

}  // namespace wgplate
