#include "oracles.hpp"
#include "test_support.hpp"

#include "wgplate/assembly.hpp"
#include "wgplate/weakops.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace wgplate;
using testing_support::rel_l2_diff;

namespace {

Mesh reference_triangle()
{
  return Mesh::from_polygons({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
}

// T(i, l) = int phi_l psi_i: maps scaled-monomial coefficients to
// coefficients in the oracle's orthonormal basis.
MatrixXd to_orthonormal(const oracle::CellData& d, int r)
{
  const auto psi = oracle::orthonormal_basis(d, r);
  const CellBasis b(d.centroid, d.h, r);
  MatrixXd t(psi.size(), b.dim());
  for (int l = 0; l < b.dim(); ++l) {
    const auto [a, e] = b.exponents(l);
    const auto phi = oracle::local_monomial(a, e);
    for (std::size_t i = 0; i < psi.size(); ++i) t(i, l) = oracle::cell_integral(d, phi * psi[i]);
  }
  return t;
}

// Local DOFs of {v, trace v} for v given by scaled-monomial coefficients.
VectorXd w_dofs_of(const Mesh& mesh, int c, const WeakSpaceConfig& cfg, const VectorXd& v)
{
  const LocalDofLayout lay(cfg, mesh.cell(c).n_edges());
  const CellBasis b(mesh, c, cfg.k);
  VectorXd x = VectorXd::Zero(lay.n_w());
  x.head(lay.dim_k) = v;
  const auto& loop = mesh.cell_edges(c);
  for (std::size_t e = 0; e < loop.size(); ++e)
    x.segment(lay.w_edge(static_cast<int>(e)), lay.dim_p) =
        l2_project_edge(mesh, loop[e].edge, [&](const Point2d& p) { return b.eval(v, p); }, cfg.p, 2 * cfg.k + 2).coeffs;
  return x;
}

VectorXd theta_dofs_of(const Mesh& mesh, int c, const WeakSpaceConfig& cfg, const VectorXd& vx, const VectorXd& vy)
{
  const LocalDofLayout lay(cfg, mesh.cell(c).n_edges());
  const CellBasis b(mesh, c, cfg.q);
  VectorXd x = VectorXd::Zero(lay.n_theta());
  x.segment(lay.theta_interior(0), lay.dim_q) = vx;
  x.segment(lay.theta_interior(1), lay.dim_q) = vy;
  const auto& loop = mesh.cell_edges(c);
  for (std::size_t e = 0; e < loop.size(); ++e)
    for (int a = 0; a < 2; ++a) {
      const VectorXd& v = a == 0 ? vx : vy;
      x.segment(lay.theta_edge(static_cast<int>(e), a), lay.dim_m) =
          l2_project_edge(mesh, loop[e].edge, [&](const Point2d& p) { return b.eval(v, p); }, cfg.m, 2 * cfg.q + 2)
              .coeffs;
    }
  return x;
}

VectorXd unit(int n, int i)
{
  VectorXd v = VectorXd::Zero(n);
  v[i] = 1;
  return v;
}

}  // namespace

TEST_SUITE("weakops")
{
  TEST_CASE("presets")
  {
    CHECK(table_preset(1, MeshFamily::tri) == WeakSpaceConfig{1, 1, 1, 1, 1, 2});
    CHECK(table_preset(2, MeshFamily::polyA) == WeakSpaceConfig{2, 2, 2, 2, 2, 4});
    CHECK(table_preset(3, MeshFamily::polyB) == WeakSpaceConfig{3, 3, 3, 3, 3, 6});
    CHECK(table_preset(3, MeshFamily::polyB).label() == "P3-P3-P3/P3-P3-P6");
    const WeakSpaceConfig r = conservative_preset(1, 6, false);
    CHECK(r.r1 == 12);
    CHECK(r.r2 == 12);
    CHECK(conservative_preset(2, 3, true).r1 == 4);
  }

  TEST_CASE("weak gradient of simple fields")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(1, PolyFamily::A);
    const WeakSpaceConfig cfg = table_preset(2, MeshFamily::polyA);
    const MatrixXd G = weak_gradient_matrix(m, 0, cfg.k, cfg.p, cfg.r1);
    const int d1 = poly_dim(cfg.r1);
    const double h = m.cell(0).diameter;

    const MatrixXd M1 = vector_mass(mass_matrix(m, 0, cfg.r1));
    const VectorXd g0 = G * w_dofs_of(m, 0, cfg, unit(poly_dim(cfg.k), 0));
    CHECK(std::sqrt(g0.dot(M1 * g0)) <= 1e-13 * std::sqrt(m.cell(0).area));

    // x - x_c is h times the first scaled monomial; its gradient is (1, 0)
    const VectorXd g1 = G * w_dofs_of(m, 0, cfg, h * unit(poly_dim(cfg.k), 1));
    VectorXd expect = VectorXd::Zero(2 * d1);
    expect[0] = 1;
    CHECK(rel_l2_diff(g1, expect, M1) <= 1e-13);
  }

  TEST_CASE("weak gradient matches the dense oracle")
  {
    const Mesh ref = reference_triangle();
    const Mesh hex = generate_nonconvex_polygonal_mesh(1, PolyFamily::A);
    const Mesh oct = generate_nonconvex_polygonal_mesh(1, PolyFamily::B);
    for (const Mesh* m : {&ref, &hex, &oct})
      for (int k = 1; k <= 2; ++k) {
        const auto d = oracle::cell_data(*m, 0);
        const int r1 = k;
        const MatrixXd G = weak_gradient_matrix(*m, 0, k, k, r1);
        const MatrixXd O = oracle::weak_gradient_coefficients(d, k, k, r1);
        const MatrixXd T = to_orthonormal(d, r1);
        const int n1 = static_cast<int>(T.rows());
        MatrixXd mapped(O.rows(), O.cols());
        for (int c = 0; c < 2; ++c) mapped.middleRows(c * n1, n1) = T * G.middleRows(c * n1, n1);
        CHECK((mapped - O).cwiseAbs().maxCoeff() <= 1e-11);
      }

    // single edge DOF on the reference triangle, r1 = 1: only the edge moment survives
    const auto d = oracle::cell_data(ref, 0);
    const MatrixXd G = weak_gradient_matrix(ref, 0, 1, 0, 1);
    const MatrixXd O = oracle::weak_gradient_coefficients(d, 1, 0, 1);
    const MatrixXd T = to_orthonormal(d, 1);
    for (int j = 3; j < 6; ++j)
      for (int c = 0; c < 2; ++c)
        CHECK((T * G.block(c * 3, j, 3, 1) - O.block(c * 3, j, 3, 1)).cwiseAbs().maxCoeff() <= 1e-13);
  }

  TEST_CASE("weak symmetric gradient")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(1, PolyFamily::B);
    const WeakSpaceConfig cfg = table_preset(1, MeshFamily::polyB);
    const MatrixXd E = weak_sym_gradient_matrix(m, 0, cfg.q, cfg.m, cfg.r2);
    const int dq = poly_dim(cfg.q), d2 = poly_dim(cfg.r2);
    const double h = m.cell(0).diameter;
    const MatrixXd M2 = voigt_mass(mass_matrix(m, 0, cfg.r2));

    // constant field: compare the L2 norm of eps_w against that of a unit tensor
    const VectorXd e0 = E * theta_dofs_of(m, 0, cfg, unit(dq, 0), VectorXd::Zero(dq));
    CHECK(std::sqrt(e0.dot(M2 * e0)) <= 1e-13 * std::sqrt(m.cell(0).area));
    const VectorXd e1 = E * theta_dofs_of(m, 0, cfg, h * unit(dq, 1), VectorXd::Zero(dq));
    CHECK(rel_l2_diff(e1, unit(3 * d2, 0), M2) <= 1e-13);

    // dense oracle, Voigt 12 entry rescaled to the Frobenius-normalized unit
    for (const Mesh* cell_mesh : {&m}) {
      const auto d = oracle::cell_data(*cell_mesh, 1);
      for (int q = 1; q <= 2; ++q) {
        const int r2 = q + 1;
        const MatrixXd Em = weak_sym_gradient_matrix(*cell_mesh, 1, q, q, r2);
        const MatrixXd O = oracle::weak_sym_gradient_coefficients(d, q, q, r2);
        const MatrixXd T = to_orthonormal(d, r2);
        const int n2 = static_cast<int>(T.rows());
        MatrixXd mapped(O.rows(), O.cols());
        for (int v = 0; v < 3; ++v)
          mapped.middleRows(v * n2, n2) = (v == 2 ? std::sqrt(2.0) : 1.0) * T * Em.middleRows(v * n2, n2);
        CHECK((mapped - O).cwiseAbs().maxCoeff() <= 1e-11);
      }
    }
  }

  TEST_CASE("kernel of the weak symmetric gradient is the rigid motions")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(1, PolyFamily::A);
    const WeakSpaceConfig cfg = table_preset(1, MeshFamily::polyA);
    const MatrixXd E = weak_sym_gradient_matrix(m, 0, cfg.q, cfg.m, cfg.r2);
    const MatrixXd M = voigt_mass(mass_matrix(m, 0, cfg.r2));
    const Eigen::SelfAdjointEigenSolver<MatrixXd> es(E.transpose() * M * E);
    const VectorXd ev = es.eigenvalues();
    const double top = ev.maxCoeff();
    int zeros = 0;
    for (double v : ev) zeros += v <= 1e-12 * top;
    CHECK(zeros == 3);
    // rotation (-(y - yc), x - xc) lies in the kernel
    const double h = m.cell(0).diameter;
    const int dq = poly_dim(cfg.q);
    const VectorXd rot = theta_dofs_of(m, 0, cfg, -h * unit(dq, 2), h * unit(dq, 1));
    const VectorXd er = E * rot;
    CHECK(std::sqrt(er.dot(M * er)) <= 1e-13 * std::sqrt(m.cell(0).area));
  }

  TEST_CASE("interior projection")
  {
    std::mt19937_64 rng(2);
    const Mesh m = generate_nonconvex_polygonal_mesh(1, PolyFamily::A);
    // constants are reproduced for every r1
    for (int r1 = 0; r1 <= 3; ++r1) {
      const MatrixXd P = interior_projection_matrix(m, 0, 1, r1);
      CHECK(P.rows() == 2 * poly_dim(r1));
      const VectorXd y = P * unit(2 * poly_dim(1), poly_dim(1));  // y component constant
      CHECK((y - unit(2 * poly_dim(r1), poly_dim(r1))).cwiseAbs().maxCoeff() <= 1e-13);
    }
    // q <= r1: exact inclusion, checked pointwise
    const MatrixXd P = interior_projection_matrix(m, 0, 2, 3);
    const CellBasis bq(m, 0, 2), br(m, 0, 3);
    VectorXd th(2 * 6);
    for (auto& v : th) v = std::uniform_real_distribution<double>(-1, 1)(rng);
    const VectorXd pt = P * th;
    for (int i = 0; i < 10; ++i) {
      const Point2d x = m.cell(0).centroid + 0.05 * Point2d(std::cos(i), std::sin(2 * i));
      for (int c = 0; c < 2; ++c)
        CHECK(br.eval(pt.segment(c * 10, 10), x) == doctest::Approx(bq.eval(th.segment(c * 6, 6), x)).epsilon(1e-12));
    }
    // q = 2, r1 = 1: matches the poly module projection of xhat^2
    const MatrixXd P21 = interior_projection_matrix(m, 0, 2, 1);
    const auto ref = l2_project_cell(
        m, 0, [&](const Point2d& x) { return bq.values(x)[CellBasis::index(2, 0)]; }, 1, 4);
    CHECK((P21.col(CellBasis::index(2, 0)).head(3) - ref.coeffs).cwiseAbs().maxCoeff() <= 1e-13);
  }

  TEST_CASE("stabilizer")
  {
    const Mesh sq = Mesh::from_polygons({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}});
    const WeakSpaceConfig cfg{1, 1, 1, 1, 1, 2};
    const MatrixXd S = stabilizer_matrix(sq, 0, 1, 1);
    const LocalDofLayout lay(cfg, 4);
    VectorXd w = VectorXd::Zero(lay.n_w());
    for (int e = 0; e < 4; ++e) w[lay.w_edge(e)] = 1.0;  // w_b = 1 (L_0 coefficient)
    CHECK(w.dot(S * w) == doctest::Approx(4.0 / std::sqrt(2.0)).epsilon(1e-14));

    // matching trace of a P1 field has zero stabilizer energy
    const VectorXd v = w_dofs_of(sq, 0, cfg, VectorXd::Ones(3));
    CHECK(std::abs(v.dot(S * v)) <= 1e-13);

    // reflex hexagon against the oracle stabilizer (bending and shear off)
    const Mesh hex = generate_nonconvex_polygonal_mesh(1, PolyFamily::A);
    const MatrixXd Sh = stabilizer_matrix(hex, 0, 1, 1);
    const Eigen::SelfAdjointEigenSolver<MatrixXd> es(Sh);
    CHECK(es.eigenvalues().minCoeff() >= -1e-13);
    CHECK((Sh - Sh.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("full local block against the brute-force oracle")
  {
    PlateParams params;
    for (double t : {1.0, 0.1}) {
      params.t = t;
      const Mesh ref = reference_triangle();
      const Mesh hex = generate_nonconvex_polygonal_mesh(1, PolyFamily::A);
      for (const auto& [m, fam] : {std::pair{&ref, MeshFamily::tri}, std::pair{&hex, MeshFamily::polyA}}) {
        const WeakSpaceConfig cfg = table_preset(1, fam);
        const MatrixXd K = local_stiffness(build_local_operators(*m, 0, cfg), params);
        const MatrixXd O = oracle::local_stiffness(*m, 0, cfg, params);
        CHECK((K - O).cwiseAbs().maxCoeff() <= 1e-11 * std::max(1.0, O.cwiseAbs().maxCoeff()));
      }
    }
  }

  TEST_CASE("inclusion consistency: weak gradient of P_k fields")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(1, PolyFamily::B);
    for (int k = 1; k <= 3; ++k) {
      const WeakSpaceConfig cfg = table_preset(k, MeshFamily::polyB);
      const MatrixXd G = weak_gradient_matrix(m, 0, cfg.k, cfg.p, cfg.r1);
      const CellBasis b(m, 0, k);
      const MatrixXd M = vector_mass(mass_matrix(m, 0, cfg.r1));
      for (int j = 0; j < b.dim(); ++j) {
        VectorXd ref(2 * poly_dim(cfg.r1));
        for (int c = 0; c < 2; ++c)
          ref.segment(c * poly_dim(cfg.r1), poly_dim(cfg.r1)) =
              l2_project_cell(m, 0, [&](const Point2d& x) { return b.gradients(x)(j, c); }, cfg.r1, 2 * k).coeffs;
        const VectorXd diff = G * w_dofs_of(m, 0, cfg, unit(b.dim(), j)) - ref;
        CHECK(std::sqrt(diff.dot(M * diff)) <= 1e-12 * std::max(1.0, std::sqrt(ref.dot(M * ref))));
      }
    }
  }
}
