#include "wgplate/weakops.hpp"

#include "wgplate/quadrature.hpp"

#include <algorithm>
#include <sstream>

namespace wgplate {

std::string WeakSpaceConfig::label() const
{
  std::ostringstream os;
  os << 'P' << k << "-P" << p << "-P" << r1 << "/P" << q << "-P" << m << "-P" << r2;
  return os.str();
}

WeakSpaceConfig table_preset(int k, MeshFamily family)
{
  if (k < 1) throw InvalidArgument("table_preset: k must be >= 1");
  int extra = 1;
  switch (family) {
    case MeshFamily::tri:
    case MeshFamily::disk: extra = 1; break;
    case MeshFamily::polyA: extra = 2; break;
    case MeshFamily::polyB: extra = 3; break;
  }
  return {k, k, k, k, k, k + extra};
}

WeakSpaceConfig conservative_preset(int k, int max_edges, bool convex)
{
  if (k < 1) throw InvalidArgument("conservative_preset: k must be >= 1");
  const int r = (convex ? max_edges : 2 * max_edges) + k - 1;
  return {k, k, r, k, k, r};
}

LocalDofLayout::LocalDofLayout(const WeakSpaceConfig& cfg, int n)
    : n_edges(n), dim_k(poly_dim(cfg.k)), dim_p(cfg.p + 1), dim_q(poly_dim(cfg.q)), dim_m(cfg.m + 1)
{}

MatrixXd vector_mass(const MatrixXd& mass)
{
  const auto d = mass.rows();
  MatrixXd out = MatrixXd::Zero(2 * d, 2 * d);
  out.block(0, 0, d, d) = mass;
  out.block(d, d, d, d) = mass;
  return out;
}

MatrixXd voigt_mass(const MatrixXd& mass)
{
  const auto d = mass.rows();
  MatrixXd out = MatrixXd::Zero(3 * d, 3 * d);
  out.block(0, 0, d, d) = mass;
  out.block(d, d, d, d) = mass;
  out.block(2 * d, 2 * d, d, d) = 2.0 * mass;
  return out;
}

namespace {

void check_degrees(std::initializer_list<int> degrees, const char* who)
{
  for (int d : degrees)
    if (d < 0) throw InvalidArgument(std::string(who) + ": degrees must be >= 0");
}

std::string cell_tag(int cell, const char* what, int r)
{
  return "cell " + std::to_string(cell) + " " + what + " P_" + std::to_string(r);
}

// Quadrature on one cell and its edges, shared by the operator builders.
struct CellGeometry
{
  QuadratureRule volume;
  LineRule line;
  std::vector<Point2d> normals;      // outward, per local edge
  std::vector<EdgeBasis> edge_frames;  // degree-0 frames for point/parameter maps
};

CellGeometry make_geometry(const Mesh& mesh, int cell, int volume_degree, int line_degree)
{
  CellGeometry g;
  g.volume = cell_rule(mesh, cell, std::min(volume_degree, max_triangle_degree));
  g.line = line_rule(line_degree);
  const auto& loop = mesh.cell_edges(cell);
  for (std::size_t i = 0; i < loop.size(); ++i) {
    g.normals.push_back(mesh.outward_normal(cell, static_cast<int>(i)));
    g.edge_frames.emplace_back(mesh, loop[i].edge, 0);
  }
  return g;
}

// Right-hand side of the weak gradient: rows are x then y test components.
MatrixXd weak_gradient_rhs(const CellGeometry& geo, const CellBasis& trial, int p, const CellBasis& test)
{
  const int dk = trial.dim(), d1 = test.dim();
  const int n_edges = static_cast<int>(geo.normals.size());
  const int n_w = dk + n_edges * (p + 1);
  MatrixXd b = MatrixXd::Zero(2 * d1, n_w);

  for (std::size_t q = 0; q < geo.volume.size(); ++q) {
    const auto& x = geo.volume.points[q];
    const double w = geo.volume.weights[q];
    const VectorXd psi = test.values(x);
    const auto grad = trial.gradients(x);
    b.block(0, 0, d1, dk).noalias() += w * psi * grad.col(0).transpose();
    b.block(d1, 0, d1, dk).noalias() += w * psi * grad.col(1).transpose();
  }
  for (int e = 0; e < n_edges; ++e) {
    const EdgeBasis eb(geo.edge_frames[e].start(), geo.edge_frames[e].end(), p);
    const double len = eb.length();
    const Point2d& n = geo.normals[e];
    const int off = dk + e * (p + 1);
    for (std::size_t q = 0; q < geo.line.size(); ++q) {
      const double s = geo.line.points[q];
      const Point2d x = eb.point(s);
      const double w = len * geo.line.weights[q];
      const VectorXd psi = test.values(x);
      const VectorXd phi = trial.values(x);
      const VectorXd lb = eb.values_at(s);
      for (int c = 0; c < 2; ++c) {
        b.block(c * d1, 0, d1, dk).noalias() -= (w * n[c]) * psi * phi.transpose();
        b.block(c * d1, off, d1, p + 1).noalias() += (w * n[c]) * psi * lb.transpose();
      }
    }
  }
  return b;
}

// Right-hand side of the weak symmetric gradient. Rows: Voigt 11, 22, 12
// blocks of the test basis; columns: theta local DOFs.
MatrixXd weak_sym_gradient_rhs(const CellGeometry& geo, const CellBasis& trial, int m, const CellBasis& test)
{
  const int dq = trial.dim(), d2 = test.dim();
  const int n_edges = static_cast<int>(geo.normals.size());
  const int n_theta = 2 * dq + n_edges * 2 * (m + 1);
  MatrixXd b = MatrixXd::Zero(3 * d2, n_theta);
  auto rows = [d2](int voigt) { return voigt * d2; };

  for (std::size_t q = 0; q < geo.volume.size(); ++q) {
    const auto& x = geo.volume.points[q];
    const double w = geo.volume.weights[q];
    const VectorXd psi = test.values(x);
    const auto grad = trial.gradients(x);
    // eta = phi e_x: eps = [[phi_x, phi_y/2], [phi_y/2, 0]]
    b.block(rows(0), 0, d2, dq).noalias() += w * psi * grad.col(0).transpose();
    b.block(rows(2), 0, d2, dq).noalias() += w * psi * grad.col(1).transpose();
    // eta = phi e_y: eps = [[0, phi_x/2], [phi_x/2, phi_y]]
    b.block(rows(1), dq, d2, dq).noalias() += w * psi * grad.col(1).transpose();
    b.block(rows(2), dq, d2, dq).noalias() += w * psi * grad.col(0).transpose();
  }
  for (int e = 0; e < n_edges; ++e) {
    const EdgeBasis eb(geo.edge_frames[e].start(), geo.edge_frames[e].end(), m);
    const double len = eb.length();
    const Point2d& n = geo.normals[e];
    // (tau n) component a for tau = E^(11), E^(22), E^(12)
    const double tn[2][3] = {{n.x(), 0.0, n.y()}, {0.0, n.y(), n.x()}};
    const int off = 2 * dq + e * 2 * (m + 1);
    for (std::size_t q = 0; q < geo.line.size(); ++q) {
      const double s = geo.line.points[q];
      const Point2d x = eb.point(s);
      const double w = len * geo.line.weights[q];
      const VectorXd psi = test.values(x);
      const VectorXd phi = trial.values(x);
      const VectorXd lb = eb.values_at(s);
      for (int a = 0; a < 2; ++a) {
        for (int v = 0; v < 3; ++v) {
          if (tn[a][v] == 0.0) continue;
          b.block(rows(v), a * dq, d2, dq).noalias() -= (w * tn[a][v]) * psi * phi.transpose();
          b.block(rows(v), off + a * (m + 1), d2, m + 1).noalias() += (w * tn[a][v]) * psi * lb.transpose();
        }
      }
    }
  }
  return b;
}

MatrixXd stabilizer(const CellGeometry& geo, const CellBasis& interior, int p, double h)
{
  const int dk = interior.dim();
  const int n_edges = static_cast<int>(geo.normals.size());
  const int n_w = dk + n_edges * (p + 1);
  MatrixXd s = MatrixXd::Zero(n_w, n_w);
  VectorXd jump(n_w);
  for (int e = 0; e < n_edges; ++e) {
    const EdgeBasis eb(geo.edge_frames[e].start(), geo.edge_frames[e].end(), p);
    const double len = eb.length();
    const int off = dk + e * (p + 1);
    for (std::size_t q = 0; q < geo.line.size(); ++q) {
      const double t = geo.line.points[q];
      jump.setZero();
      jump.head(dk) = interior.values(eb.point(t));
      jump.segment(off, p + 1) = -eb.values_at(t);
      s.selfadjointView<Eigen::Lower>().rankUpdate(jump, len * geo.line.weights[q] / h);
    }
  }
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return s;
}

// Applies blockdiag(M^-1, ..., M^-1 / weight) to stacked component blocks.
MatrixXd solve_blocks(const SpdFactor& factor, const MatrixXd& rhs, std::initializer_list<double> weights)
{
  const auto d = factor.matrix().rows();
  MatrixXd out(rhs.rows(), rhs.cols());
  Eigen::Index row = 0;
  for (double w : weights) {
    out.middleRows(row, d) = factor.solve(rhs.middleRows(row, d)) / w;
    row += d;
  }
  return out;
}

}  // namespace

MatrixXd weak_gradient_matrix(const Mesh& mesh, int cell, int k, int p, int r1)
{
  check_degrees({k, p, r1}, "weak_gradient_matrix");
  const CellBasis trial(mesh, cell, k), test(mesh, cell, r1);
  const auto geo = make_geometry(mesh, cell, std::max(2 * r1, k + r1), std::max(k, p) + r1);
  const SpdFactor m1(mass_matrix(test, geo.volume), cell_tag(cell, "mass", r1));
  return solve_blocks(m1, weak_gradient_rhs(geo, trial, p, test), {1.0, 1.0});
}

MatrixXd weak_sym_gradient_matrix(const Mesh& mesh, int cell, int q, int m, int r2)
{
  check_degrees({q, m, r2}, "weak_sym_gradient_matrix");
  const CellBasis trial(mesh, cell, q), test(mesh, cell, r2);
  const auto geo = make_geometry(mesh, cell, std::max(2 * r2, q + r2), std::max(q, m) + r2);
  const SpdFactor m2(mass_matrix(test, geo.volume), cell_tag(cell, "mass", r2));
  return solve_blocks(m2, weak_sym_gradient_rhs(geo, trial, m, test), {1.0, 1.0, 2.0});
}

MatrixXd interior_projection_matrix(const Mesh& mesh, int cell, int q, int r1)
{
  check_degrees({q, r1}, "interior_projection_matrix");
  const CellBasis from(mesh, cell, q), to(mesh, cell, r1);
  const QuadratureRule rule = cell_rule(mesh, cell, std::min(max_triangle_degree, std::max(2 * r1, q + r1)));
  const SpdFactor m1(mass_matrix(to, rule), cell_tag(cell, "mass", r1));
  const MatrixXd block = m1.solve(mixed_mass_matrix(to, from, rule));
  const int dq = from.dim(), d1 = to.dim();
  MatrixXd out = MatrixXd::Zero(2 * d1, 2 * dq);
  out.block(0, 0, d1, dq) = block;
  out.block(d1, dq, d1, dq) = block;
  return out;
}

MatrixXd stabilizer_matrix(const Mesh& mesh, int cell, int k, int p, double h)
{
  check_degrees({k, p}, "stabilizer_matrix");
  const CellBasis interior(mesh, cell, k);
  const auto geo = make_geometry(mesh, cell, 0, 2 * std::max(k, p));
  return stabilizer(geo, interior, p, h > 0 ? h : mesh.cell(cell).diameter);
}

LocalOperators build_local_operators(const Mesh& mesh, int cell, const WeakSpaceConfig& cfg)
{
  check_degrees({cfg.k, cfg.p, cfg.r1, cfg.q, cfg.m, cfg.r2}, "build_local_operators");
  LocalOperators ops;
  ops.config = cfg;
  ops.layout = LocalDofLayout(cfg, mesh.cell(cell).n_edges());

  const CellBasis bk(mesh, cell, cfg.k), bq(mesh, cell, cfg.q);
  const CellBasis b1(mesh, cell, cfg.r1), b2(mesh, cell, cfg.r2);
  const int vol_deg = std::max({2 * cfg.r1, 2 * cfg.r2, 2 * cfg.k, 2 * cfg.q, cfg.k + cfg.r1, cfg.q + cfg.r2});
  const int line_deg = std::max({std::max(cfg.k, cfg.p) + cfg.r1, std::max(cfg.q, cfg.m) + cfg.r2,
                                 2 * std::max(cfg.k, cfg.p)});
  if (vol_deg > max_triangle_degree)
    throw UnsupportedDegree("build_local_operators: " + cfg.label() + " needs volume quadrature degree " +
                            std::to_string(vol_deg));
  const auto geo = make_geometry(mesh, cell, vol_deg, line_deg);

  ops.mass_r1 = mass_matrix(b1, geo.volume);
  ops.mass_r2 = mass_matrix(b2, geo.volume);
  ops.mass_k = mass_matrix(bk, geo.volume);
  ops.mass_q = mass_matrix(bq, geo.volume);
  const SpdFactor m1(ops.mass_r1, cell_tag(cell, "mass", cfg.r1));
  const SpdFactor m2(ops.mass_r2, cell_tag(cell, "mass", cfg.r2));

  ops.G = solve_blocks(m1, weak_gradient_rhs(geo, bk, cfg.p, b1), {1.0, 1.0});
  ops.E = solve_blocks(m2, weak_sym_gradient_rhs(geo, bq, cfg.m, b2), {1.0, 1.0, 2.0});

  const int d1 = b1.dim(), dq = bq.dim();
  ops.Pint = MatrixXd::Zero(2 * d1, ops.layout.n_theta());
  const MatrixXd block = m1.solve(mixed_mass_matrix(b1, bq, geo.volume));
  ops.Pint.block(0, 0, d1, dq) = block;
  ops.Pint.block(d1, dq, d1, dq) = block;

  ops.S = stabilizer(geo, bk, cfg.p, mesh.cell(cell).diameter);
  return ops;
}

}  // namespace wgplate
