#include "wgplate/assembly.hpp"
#include "wgplate/solver.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <numeric>

#include <map>
#include <random>
#include <sstream>

using namespace wgplate;

namespace {

Mesh one_triangle()
{
  return Mesh::from_polygons({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
}

Problem unloaded(const PlateParams& pp)
{
  Problem pb = problem1(pp);
  pb.load = [](const Point2d&) { return 0.0; };
  return pb;
}

}  // namespace

TEST_SUITE("assembly")
{
  TEST_CASE("DOF counts")
  {
    const WeakSpaceConfig p1{1, 1, 1, 1, 1, 2};
    const Mesh t = one_triangle();
    CHECK(DofMap(t, p1).n_w() == 3 + 3 * 2);

    const Mesh sq = generate_triangular_mesh(1);
    const DofMap dm(sq, p1);
    CHECK(dm.n_w() - 2 * 3 == 5 * 2);
    CHECK(dm.n_theta() == 2 * (2 * 3 + 5 * 2));
    CHECK(dm.size() == 16 + 32);
    // every DOF of the boundary edges, both fields
    CHECK(dm.constrained().size() == 4 * 2 + 4 * 4);
    CHECK(std::is_sorted(dm.constrained().begin(), dm.constrained().end()));

    const auto cd = dm.cell_dofs(sq, 0);
    CHECK(cd.size() == 3 + 3 * 2 + 2 * 3 + 3 * 4);
  }

  TEST_CASE("local block kernel and guards")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(1, PolyFamily::A);
    const WeakSpaceConfig cfg = table_preset(1, MeshFamily::polyA);
    const LocalOperators ops = build_local_operators(m, 0, cfg);
    PlateParams pp;
    pp.t = 0.1;
    const MatrixXd K = local_stiffness(ops, pp);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::SelfAdjointEigenSolver<MatrixXd> es(K);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());

    // w = constant with matching trace, theta = 0
    VectorXd x = VectorXd::Zero(K.rows());
    x[0] = 1.0;
    for (int e = 0; e < ops.layout.n_edges; ++e) x[ops.layout.w_edge(e)] = 1.0;
    CHECK(x.dot(K * x) <= 1e-12 * K.norm());

    LocalOperators broken = ops;
    broken.G.conservativeResize(broken.G.rows(), broken.G.cols() - 1);
    CHECK_THROWS_AS(local_stiffness(broken, pp), InternalError);
  }

  TEST_CASE("scatter matches a per-cell dense sum")
  {
    const Mesh m = generate_triangular_mesh(1);
    const WeakSpaceConfig cfg = table_preset(2, MeshFamily::tri);
    const Discretization disc = discretize(m, cfg);
    PlateParams pp;
    const Problem pb = problem1(pp);
    const GlobalSystem sys = assemble_system(disc, pb, pp);

    MatrixXd dense = MatrixXd::Zero(disc.dofs.size(), disc.dofs.size());
    for (int c = 0; c < m.n_cells(); ++c) {
      const auto dofs = disc.dofs.cell_dofs(m, c);
      const MatrixXd K = local_stiffness(disc.ops[c], pp);
      for (std::size_t i = 0; i < dofs.size(); ++i)
        for (std::size_t j = 0; j < dofs.size(); ++j) dense(dofs[i], dofs[j]) += K(i, j);
    }
    CHECK((MatrixXd(sys.A) - dense).cwiseAbs().maxCoeff() <= 1e-15 * dense.cwiseAbs().maxCoeff());

    // load only on interior w DOFs
    for (int i = 0; i < sys.F.size(); ++i)
      if (i >= m.n_cells() * poly_dim(cfg.k)) CHECK(sys.F[i] == 0.0);
    CHECK(sys.F.head(m.n_cells() * poly_dim(cfg.k)).norm() > 0);

    // pattern(A) = pattern(A^T)
    const SparseMatrixd At = sys.A.transpose();
    const SparseMatrixd diffp = sys.A - At;
    CHECK(sys.A.nonZeros() == At.nonZeros());
    for (int col = 0; col < sys.A.outerSize(); ++col)
      for (SparseMatrixd::InnerIterator it(sys.A, col); it; ++it) CHECK(At.coeff(it.row(), it.col()) == it.value());
    CHECK(diffp.norm() == 0.0);
  }

  TEST_CASE("zero load gives a zero right-hand side")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(2, PolyFamily::B);
    const Discretization disc = discretize(m, table_preset(1, MeshFamily::polyB));
    const PlateParams pp;
    CHECK(assemble_system(disc, unloaded(pp), pp).F.norm() == 0.0);
  }

  TEST_CASE("permuted cell order gives a permuted system")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(2, PolyFamily::A);
    std::vector<std::vector<int>> polys;
    for (const auto& c : m.cells()) polys.push_back(c.vertices);
    std::vector<int> perm(polys.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(5);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<int>> shuffled;
    for (int c : perm) shuffled.push_back(polys[c]);
    const Mesh p = Mesh::from_polygons(m.vertices(), shuffled);

    const WeakSpaceConfig cfg = table_preset(2, MeshFamily::polyA);
    PlateParams pp;
    pp.t = 0.01;
    const Problem pb = problem1(pp);
    const Discretization da = discretize(m, cfg), db = discretize(p, cfg);
    const GlobalSystem a = assemble_system(da, pb, pp), b = assemble_system(db, pb, pp);

    // DOF map from m to p through cells and edge endpoints
    std::map<std::array<int, 2>, int> edge_of;
    for (int e = 0; e < p.n_edges(); ++e) edge_of[p.edge(e).endpoints] = e;
    std::vector<int> new_cell(m.n_cells());
    for (std::size_t i = 0; i < perm.size(); ++i) new_cell[perm[i]] = static_cast<int>(i);
    std::vector<int> map(da.dofs.size(), -1);
    const int dk = poly_dim(cfg.k), dp = cfg.p + 1, dq = poly_dim(cfg.q), dmm = cfg.m + 1;
    for (int c = 0; c < m.n_cells(); ++c) {
      for (int i = 0; i < dk; ++i) map[da.dofs.w_cell(c) + i] = db.dofs.w_cell(new_cell[c]) + i;
      for (int i = 0; i < 2 * dq; ++i) map[da.dofs.theta_cell(c) + i] = db.dofs.theta_cell(new_cell[c]) + i;
    }
    for (int e = 0; e < m.n_edges(); ++e) {
      const int f = edge_of.at(m.edge(e).endpoints);
      for (int i = 0; i < dp; ++i) map[da.dofs.w_edge(e) + i] = db.dofs.w_edge(f) + i;
      for (int i = 0; i < 2 * dmm; ++i) map[da.dofs.theta_edge(e) + i] = db.dofs.theta_edge(f) + i;
    }
    const double scale = MatrixXd(a.A).cwiseAbs().maxCoeff();
    double worst = 0;
    for (int col = 0; col < a.A.outerSize(); ++col)
      for (SparseMatrixd::InnerIterator it(a.A, col); it; ++it)
        worst = std::max(worst, std::abs(b.A.coeff(map[it.row()], map[it.col()]) - it.value()));
    CHECK(worst <= 1e-14 * scale);
    CHECK(a.A.nonZeros() == b.A.nonZeros());
    for (int i = 0; i < a.F.size(); ++i) CHECK(b.F[map[i]] == doctest::Approx(a.F[i]).epsilon(1e-14));
  }

  TEST_CASE("worker count does not change the matrix bits")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(4, PolyFamily::B);
    const WeakSpaceConfig cfg = table_preset(2, MeshFamily::polyB);
    const PlateParams pp;
    const Problem pb = problem1(pp);
    const GlobalSystem a = assemble_system(discretize(m, cfg, 1), pb, pp, 1);
    const GlobalSystem b = assemble_system(discretize(m, cfg, 4), pb, pp, 4);
    REQUIRE(a.A.nonZeros() == b.A.nonZeros());
    CHECK(std::equal(a.A.valuePtr(), a.A.valuePtr() + a.A.nonZeros(), b.A.valuePtr()));
    CHECK(std::equal(a.A.innerIndexPtr(), a.A.innerIndexPtr() + a.A.nonZeros(), b.A.innerIndexPtr()));
    CHECK(a.F == b.F);
  }

  TEST_CASE("essential boundary conditions")
  {
    const Mesh m = generate_triangular_mesh(2);
    const WeakSpaceConfig cfg = table_preset(1, MeshFamily::tri);
    const Discretization disc = discretize(m, cfg);
    const PlateParams pp;
    const Problem pb = problem1(pp);
    const GlobalSystem sys = assemble_system(disc, pb, pp);

    const VectorXd bv = boundary_values(disc, pb, BoundaryData::exact_trace);
    CHECK(bv.cwiseAbs().maxCoeff() <= 1e-17);
    const ReducedSystem red = apply_essential_bc(sys, disc, pb);
    CHECK(red.A.rows() == disc.dofs.size() - static_cast<int>(disc.dofs.constrained().size()));
    CHECK(red.free_dofs.size() + disc.dofs.constrained().size() == static_cast<std::size_t>(disc.dofs.size()));

    // inhomogeneous data: elimination equals solving with the rows replaced
    VectorXd g = VectorXd::Zero(disc.dofs.size());
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int d : disc.dofs.constrained()) g[d] = u(rng);
    const ReducedSystem r2 = apply_essential_bc(sys, g);
    const VectorXd x = r2.expand(solve_spd(r2.A, r2.F).x);
    const VectorXd res = sys.A * x - sys.F;
    for (int i : r2.free_dofs) CHECK(std::abs(res[i]) <= 1e-10 * sys.F.norm());
    for (int d : disc.dofs.constrained()) CHECK(x[d] == g[d]);
    CHECK_THROWS_AS(apply_essential_bc(sys, VectorXd::Zero(3)), InternalError);
  }

  TEST_CASE("elimination agrees with a penalty solve")
  {
    const Mesh m = generate_triangular_mesh(1);
    const WeakSpaceConfig cfg = table_preset(1, MeshFamily::tri);
    const Discretization disc = discretize(m, cfg);
    PlateParams pp;
    const Problem pb = problem1(pp);
    const GlobalSystem sys = assemble_system(disc, pb, pp);
    const ReducedSystem red = apply_essential_bc(sys, disc, pb);
    const VectorXd x = red.expand(solve_spd(red.A, red.F).x);
    const double energy = x.dot(sys.A * x);

    SparseMatrixd P = sys.A;
    for (int d : disc.dofs.constrained()) P.coeffRef(d, d) += 1e10;
    const Eigen::SimplicialLDLT<SparseMatrixd> ldlt(P);
    const VectorXd xp = ldlt.solve(sys.F);
    CHECK(energy > 0);
    CHECK(xp.dot(sys.A * xp) == doctest::Approx(energy).epsilon(1e-6));
  }

  TEST_CASE("reduced matrix is positive definite")
  {
    for (MeshFamily fam : {MeshFamily::tri, MeshFamily::disk}) {
      const Mesh m = generate_mesh(fam, 2);
      const Discretization disc = discretize(m, table_preset(1, fam));
      PlateParams pp;
      pp.t = 0.01;
      const Problem pb = make_problem(fam == MeshFamily::disk ? 2 : 1, pp);
      const ReducedSystem red = apply_essential_bc(assemble_system(disc, pb, pp), disc, pb);
      CHECK(smallest_ritz_value(red.A) > 0);
      const Eigen::SimplicialLLT<SparseMatrixd> llt(red.A);
      CHECK(llt.info() == Eigen::Success);
    }
  }

  TEST_CASE("matrix dump")
  {
    Eigen::MatrixXd d(3, 3);
    d << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
    const SparseMatrixd A = d.sparseView();
    std::ostringstream os;
    write_matrix_lower(os, A);
    CHECK(os.str() == "0 0 4\n1 0 1\n1 1 3\n2 1 0.5\n2 2 2\n");
  }
}
