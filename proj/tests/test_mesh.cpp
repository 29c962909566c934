#include "wgplate/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace wgplate;

TEST_SUITE("mesh")
{
  TEST_CASE("triangular generator counts and sizes")
  {
    const Mesh m1 = generate_triangular_mesh(1);
    CHECK(m1.n_cells() == 2);
    CHECK(m1.n_edges() == 5);
    CHECK(m1.n_vertices() == 4);

    const Mesh m2 = generate_triangular_mesh(2);
    CHECK(m2.n_cells() == 8);
    CHECK(m2.total_area() == doctest::Approx(1.0).epsilon(1e-14));

    // longest edge of a cell of side 1/4 is its diagonal
    CHECK(generate_triangular_mesh(4).h_max() == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
    CHECK_THROWS_AS(generate_triangular_mesh(0), InvalidArgument);
  }

  TEST_CASE("non-convex generators")
  {
    const Mesh a1 = generate_nonconvex_polygonal_mesh(1, PolyFamily::A);
    REQUIRE(a1.n_cells() == 2);
    for (int c = 0; c < 2; ++c) {
      CHECK(a1.cell(c).n_edges() == 6);
      CHECK(reflex_vertices(a1, c).size() == 1);
    }
    const Mesh a2 = generate_nonconvex_polygonal_mesh(2, PolyFamily::A);
    CHECK(a2.n_cells() == 8);
    CHECK(a2.total_area() == doctest::Approx(1.0).epsilon(1e-14));

    const Mesh b2 = generate_nonconvex_polygonal_mesh(2, PolyFamily::B);
    for (int c = 0; c < b2.n_cells(); ++c) {
      CHECK(b2.cell(c).n_edges() == 8);
      CHECK(reflex_vertices(b2, c).size() == 2);
    }
    CHECK_THROWS_AS(parse_poly_family("C"), InvalidArgument);
  }

  TEST_CASE("disk generator")
  {
    const Mesh d1 = generate_disk_mesh(1);
    for (int e : d1.boundary_edges())
      for (int v : d1.edge(e).endpoints) CHECK(std::abs(d1.vertex(v).squaredNorm() - 1.0) <= 1e-14);

    double prev = 0;
    for (int n = 1; n <= 6; ++n) {
      const Mesh d = generate_disk_mesh(n);
      for (const auto& c : d.cells()) CHECK(c.area > 0);
      // inscribed 6n-gon
      const double inscribed = 3.0 * n * std::sin(2 * std::numbers::pi / (6 * n));
      CHECK(d.total_area() == doctest::Approx(inscribed).epsilon(1e-13));
      CHECK(d.total_area() > prev);
      prev = d.total_area();
    }
    const Mesh d3 = generate_disk_mesh(3);
    CHECK(std::numbers::pi - d3.total_area() <= 2.0 * d3.h_max() * d3.h_max());
  }

  TEST_CASE("tiling, normals and refinement over all families")
  {
    for (MeshFamily fam : {MeshFamily::tri, MeshFamily::polyA, MeshFamily::polyB, MeshFamily::disk}) {
      for (int n : {1, 2, 3, 8, 64}) {
        if (fam != MeshFamily::tri && n == 64) continue;  // keeps the suite fast; tri covers the upper bound
        const Mesh m = generate_mesh(fam, n);
        const MeshReport rep = validate(m, domain_area(fam, n));
        INFO(to_string(fam), " n=", n);
        CHECK(rep.ok());
        for (int e = 0; e < m.n_edges(); ++e) {
          const Edge& ed = m.edge(e);
          if (ed.on_boundary()) continue;
          Point2d sum = Point2d::Zero();
          for (int c : ed.cells) {
            const auto& loop = m.cell_edges(c);
            for (std::size_t l = 0; l < loop.size(); ++l)
              if (loop[l].edge == e) sum += m.outward_normal(c, static_cast<int>(l));
          }
          CHECK(sum.norm() <= 1e-14);
        }
        if (fam == MeshFamily::polyA || fam == MeshFamily::polyB)
          for (int c = 0; c < m.n_cells(); ++c) CHECK(!reflex_vertices(m, c).empty());
      }
    }
    for (MeshFamily fam : {MeshFamily::tri, MeshFamily::polyA, MeshFamily::polyB})
      for (int n : {1, 2, 4, 8, 16}) {
        const double ratio = generate_mesh(fam, 2 * n).h_max() / generate_mesh(fam, n).h_max();
        CHECK(std::abs(ratio - 0.5) <= 1e-12);
      }
  }

  TEST_CASE("edge orientation runs from the lower to the higher vertex")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(2, PolyFamily::B);
    for (const auto& e : m.edges()) {
      CHECK(e.endpoints[0] < e.endpoints[1]);
      const Point2d d = m.vertex(e.endpoints[1]) - m.vertex(e.endpoints[0]);
      CHECK((d.normalized() - e.tangent).norm() <= 1e-15);
    }
  }

  TEST_CASE("validate reports malformed meshes")
  {
    const std::vector<Point2d> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(validate(Mesh::from_polygons(square, {{0, 1, 2}, {0, 2, 3}}), 1.0).ok());

    const MeshReport cw = validate(Mesh::from_polygons(square, {{0, 1, 2}, {0, 3, 2}}));
    REQUIRE(cw.has(MeshCheck::orientation));
    for (const auto& f : cw.failures)
      if (f.check == MeshCheck::orientation) CHECK(f.indices == std::vector<int>{1});

    const MeshReport dup = validate(Mesh::from_polygons(square, {{0, 1, 2}, {0, 2, 3}, {0, 1, 2}}));
    CHECK(dup.has(MeshCheck::non_manifold_edge));

    const MeshReport gap = validate(Mesh::from_polygons(square, {{0, 1, 2}}), 1.0);
    CHECK(gap.has(MeshCheck::tiling));

    // bow-tie quadrilateral
    const MeshReport bow = validate(Mesh::from_polygons({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {{0, 1, 2, 3}}));
    CHECK(!bow.ok());
  }

  TEST_CASE("plain-text round trip")
  {
    const Mesh m = generate_nonconvex_polygonal_mesh(2, PolyFamily::A);
    std::stringstream ss;
    write_mesh(ss, m);
    std::string header;
    std::getline(ss, header);
    CHECK(header == std::to_string(m.n_vertices()) + " " + std::to_string(m.n_cells()) + " " +
                        std::to_string(m.n_edges()));
    ss.seekg(0);
    const Mesh r = read_mesh(ss);
    REQUIRE(r.n_cells() == m.n_cells());
    CHECK(r.n_edges() == m.n_edges());
    for (int v = 0; v < m.n_vertices(); ++v) CHECK(r.vertex(v) == m.vertex(v));
    for (int c = 0; c < m.n_cells(); ++c) CHECK(r.cell(c).vertices == m.cell(c).vertices);
  }
}
