#pragma once

#include "wgplate/types.hpp"

#include <algorithm>
#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wgplate {

// ---------------------------------------------------------------------------
// Planar polygon helpers, usable with any Eigen scalar.

template<typename Scalar>
Scalar cross2(const Point2<Scalar>& a, const Point2<Scalar>& b)
{
  return a.x() * b.y() - a.y() * b.x();
}

/// Signed shoelace area; positive for counterclockwise vertex order.
template<typename Scalar>
Scalar signed_area(const std::vector<Point2<Scalar>>& poly)
{
  Scalar twice{0};
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross2(poly[i], poly[(i + 1) % n]);
  }
  return twice / Scalar(2);
}

template<typename Scalar>
Point2<Scalar> polygon_centroid(const std::vector<Point2<Scalar>>& poly)
{
  Point2<Scalar> c = Point2<Scalar>::Zero();
  Scalar twice{0};
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    const Scalar w = cross2(a, b);
    twice += w;
    c += w * (a + b);
  }
  return c / (Scalar(3) * twice);
}

template<typename Scalar>
Scalar polygon_diameter(const std::vector<Point2<Scalar>>& poly)
{
  Scalar d{0};
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j)
      d = std::max(d, (poly[i] - poly[j]).norm());
  return d;
}

/// True when the closed polygon has two non-adjacent edges that touch.
bool polygon_self_intersects(const std::vector<Point2d>& poly);

// ---------------------------------------------------------------------------

struct Cell
{
  std::vector<int> vertices;  // counterclockwise
  Point2d centroid = Point2d::Zero();
  double diameter = 0.0;
  double area = 0.0;  // signed; negative flags a clockwise cell

  int n_edges() const { return static_cast<int>(vertices.size()); }
};

struct Edge
{
  std::array<int, 2> endpoints{};  // endpoints[0] < endpoints[1]
  double length = 0.0;
  Point2d tangent = Point2d::Zero();  // from endpoints[0] to endpoints[1]
  // Incident cells; the first is the cell traversing the edge along its
  // tangent when one exists. Well-formed meshes have one or two entries.
  std::vector<int> cells;

  /// Unit normal to the right of the tangent.
  Point2d right_normal() const { return {tangent.y(), -tangent.x()}; }
  bool on_boundary() const { return cells.size() == 1; }
};

/// One edge of a cell boundary. sign = +1 when the counterclockwise cell
/// loop runs along the edge tangent; the outward normal is then
/// sign * edge.right_normal().
struct CellEdge
{
  int edge = -1;
  int sign = 1;
};

class Mesh
{
public:
  Mesh() = default;

  /// Builds topology and geometry from polygon vertex loops. Does not reject
  /// malformed input; run validate() for diagnostics.
  static Mesh from_polygons(std::vector<Point2d> vertices,
                            std::vector<std::vector<int>> polygons);

  const std::vector<Point2d>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<CellEdge>& cell_edges(int c) const { return cell_edges_[c]; }
  const std::vector<int>& boundary_edges() const { return boundary_edges_; }

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  double h_max() const { return h_max_; }

  const Point2d& vertex(int v) const { return vertices_[v]; }
  const Cell& cell(int c) const { return cells_[c]; }
  const Edge& edge(int e) const { return edges_[e]; }

  std::vector<Point2d> cell_polygon(int c) const;
  /// Outward unit normal of edge `local` (position in cell_edges(c)).
  Point2d outward_normal(int c, int local) const;
  double total_area() const;
  bool is_boundary_edge(int e) const { return edges_[e].on_boundary(); }

private:
  std::vector<Point2d> vertices_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<std::vector<CellEdge>> cell_edges_;
  std::vector<int> boundary_edges_;
  double h_max_ = 0.0;
};

/// Local vertex positions with interior angle greater than pi.
std::vector<int> reflex_vertices(const Mesh& mesh, int cell);

// ---------------------------------------------------------------------------
// Validation

enum class MeshCheck
{
  degenerate_cell,    // fewer than 3 vertices or non-positive |area|
  orientation,        // clockwise vertex loop
  self_intersection,  // polygon is not simple
  diameter,           // stored h_T differs from max vertex distance
  non_manifold_edge,  // edge with 0 or more than 2 incident cells
  open_loop,          // cell edge loop not closed / inconsistent signs
  normal_mismatch,    // interior edge normals not antiparallel
  tiling,             // sum of areas differs from the expected domain area
};

std::string_view to_string(MeshCheck check);

struct MeshFailure
{
  MeshCheck check;
  std::vector<int> indices;  // offending cells or edges
  std::string message;
};

struct MeshReport
{
  std::vector<MeshFailure> failures;
  bool ok() const { return failures.empty(); }
  bool has(MeshCheck check) const;
};

/// Checks every structural invariant. When expected_area > 0 the tiling
/// check compares the cell-area sum against it (1e-12 relative).
MeshReport validate(const Mesh& mesh, double expected_area = 0.0);

// ---------------------------------------------------------------------------
// Generators. `n` is the number of subdivisions per unit length (rings for
// the disk), so h_max halves when n doubles.

enum class PolyFamily
{
  A,  // hexagons, one reflex vertex each
  B,  // octagons, two reflex vertices each
};

enum class MeshFamily
{
  tri,
  polyA,
  polyB,
  disk,
};

PolyFamily parse_poly_family(std::string_view name);
MeshFamily parse_mesh_family(std::string_view name);
std::string_view to_string(MeshFamily family);

Mesh generate_triangular_mesh(int n);
Mesh generate_nonconvex_polygonal_mesh(int n, PolyFamily family);
Mesh generate_disk_mesh(int n);
Mesh generate_mesh(MeshFamily family, int n);

/// Area enclosed by the generator's domain boundary at subdivision n (the
/// inscribed 6n-gon for the disk).
double domain_area(MeshFamily family, int n);

// ---------------------------------------------------------------------------
// Plain-text mesh format:
//   NV NC NE
//   x y            (NV lines)
//   k v1 ... vk    (NC lines, 0-based, counterclockwise)
// Edges are rebuilt on read.

void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace wgplate
