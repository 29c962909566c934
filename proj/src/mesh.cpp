#include "wgplate/mesh.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

namespace wgplate {

namespace {

int orient(const Point2d& a, const Point2d& b, const Point2d& c)
{
  const double v = cross2<double>(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(const Point2d& a, const Point2d& b, const Point2d& p)
{
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_touch(const Point2d& a, const Point2d& b, const Point2d& c, const Point2d& d)
{
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Deduplicates generator vertices that are computed more than once.
class VertexPool
{
public:
  int add(const Point2d& p)
  {
    const auto key = std::make_pair(std::llround(p.x() * 1e9), std::llround(p.y() * 1e9));
    auto [it, inserted] = index_.try_emplace(key, static_cast<int>(points_.size()));
    if (inserted) points_.push_back(p);
    return it->second;
  }
  std::vector<Point2d> take() { return std::move(points_); }

private:
  std::map<std::pair<long long, long long>, int> index_;
  std::vector<Point2d> points_;
};

void require_valid(const Mesh& mesh, const char* who)
{
  const MeshReport report = validate(mesh);
  if (!report.ok()) {
    throw InternalError(std::string(who) + ": generated mesh fails " +
                        std::string(to_string(report.failures.front().check)) + ": " +
                        report.failures.front().message);
  }
}

}  // namespace

bool polygon_self_intersects(const std::vector<Point2d>& poly)
{
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    // repeated vertices
    for (std::size_t j = i + 1; j < n; ++j)
      if (poly[i] == poly[j]) return true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent
      if (segments_touch(a, b, poly[j], poly[(j + 1) % n])) return true;
    }
  }
  return false;
}

Mesh Mesh::from_polygons(std::vector<Point2d> vertices, std::vector<std::vector<int>> polygons)
{
  Mesh m;
  m.vertices_ = std::move(vertices);
  m.cells_.reserve(polygons.size());
  m.cell_edges_.resize(polygons.size());

  std::map<std::pair<int, int>, int> edge_index;
  for (std::size_t c = 0; c < polygons.size(); ++c) {
    Cell cell;
    cell.vertices = std::move(polygons[c]);
    const auto poly = [&] {
      std::vector<Point2d> p;
      for (int v : cell.vertices) p.push_back(m.vertices_[v]);
      return p;
    }();
    cell.area = signed_area(poly);
    cell.centroid = std::abs(cell.area) > 0 ? polygon_centroid(poly) : Point2d::Zero();
    cell.diameter = polygon_diameter(poly);
    m.h_max_ = std::max(m.h_max_, cell.diameter);

    const int nv = cell.n_edges();
    for (int i = 0; i < nv; ++i) {
      const int a = cell.vertices[i];
      const int b = cell.vertices[(i + 1) % nv];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.try_emplace({key.first, key.second}, m.n_edges());
      if (inserted) {
        Edge e;
        e.endpoints = {key.first, key.second};
        const Point2d d = m.vertices_[key.second] - m.vertices_[key.first];
        e.length = d.norm();
        e.tangent = e.length > 0 ? Point2d(d / e.length) : Point2d::Zero();
        m.edges_.push_back(std::move(e));
      }
      m.edges_[it->second].cells.push_back(static_cast<int>(c));
      m.cell_edges_[c].push_back({it->second, a < b ? 1 : -1});
    }
    m.cells_.push_back(std::move(cell));
  }
  for (int e = 0; e < m.n_edges(); ++e)
    if (m.edges_[e].on_boundary()) m.boundary_edges_.push_back(e);
  return m;
}

std::vector<Point2d> Mesh::cell_polygon(int c) const
{
  std::vector<Point2d> p;
  p.reserve(cells_[c].vertices.size());
  for (int v : cells_[c].vertices) p.push_back(vertices_[v]);
  return p;
}

Point2d Mesh::outward_normal(int c, int local) const
{
  const CellEdge& ce = cell_edges_[c][local];
  return ce.sign * edges_[ce.edge].right_normal();
}

double Mesh::total_area() const
{
  double a = 0.0;
  for (const auto& c : cells_) a += c.area;
  return a;
}

std::vector<int> reflex_vertices(const Mesh& mesh, int cell)
{
  const auto poly = mesh.cell_polygon(cell);
  const int n = static_cast<int>(poly.size());
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    const Point2d& prev = poly[(i + n - 1) % n];
    const Point2d& cur = poly[i];
    const Point2d& next = poly[(i + 1) % n];
    if (cross2<double>(cur - prev, next - cur) < 0) out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(MeshCheck check)
{
  switch (check) {
    case MeshCheck::degenerate_cell: return "degenerate-cell";
    case MeshCheck::orientation: return "orientation";
    case MeshCheck::self_intersection: return "self-intersection";
    case MeshCheck::diameter: return "diameter";
    case MeshCheck::non_manifold_edge: return "non-manifold-edge";
    case MeshCheck::open_loop: return "open-loop";
    case MeshCheck::normal_mismatch: return "normal-mismatch";
    case MeshCheck::tiling: return "tiling";
  }
  return "unknown";
}

bool MeshReport::has(MeshCheck check) const
{
  for (const auto& f : failures)
    if (f.check == check) return true;
  return false;
}

MeshReport validate(const Mesh& mesh, double expected_area)
{
  MeshReport report;
  auto fail = [&](MeshCheck check, std::vector<int> idx, const std::string& what) {
    std::ostringstream msg;
    msg << what;
    for (int i : idx) msg << ' ' << i;
    report.failures.push_back({check, std::move(idx), msg.str()});
  };

  std::vector<int> degenerate, clockwise, crossing, bad_diam, open;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    const auto poly = mesh.cell_polygon(c);
    if (cell.n_edges() < 3 || cell.area == 0.0) {
      degenerate.push_back(c);
      continue;
    }
    if (cell.area < 0) clockwise.push_back(c);
    if (polygon_self_intersects(poly)) crossing.push_back(c);
    if (std::abs(cell.diameter - polygon_diameter(poly)) > 1e-14 * cell.diameter)
      bad_diam.push_back(c);

    const auto& loop = mesh.cell_edges(c);
    bool closed = static_cast<int>(loop.size()) == cell.n_edges();
    for (std::size_t i = 0; closed && i < loop.size(); ++i) {
      const Edge& a = mesh.edge(loop[i].edge);
      const Edge& b = mesh.edge(loop[(i + 1) % loop.size()].edge);
      const int head = loop[i].sign > 0 ? a.endpoints[1] : a.endpoints[0];
      const int tail = loop[(i + 1) % loop.size()].sign > 0 ? b.endpoints[0] : b.endpoints[1];
      closed = head == tail;
    }
    if (!closed) open.push_back(c);
  }
  if (!degenerate.empty()) fail(MeshCheck::degenerate_cell, degenerate, "degenerate cells:");
  if (!clockwise.empty()) fail(MeshCheck::orientation, clockwise, "clockwise cells:");
  if (!crossing.empty()) fail(MeshCheck::self_intersection, crossing, "non-simple cells:");
  if (!bad_diam.empty()) fail(MeshCheck::diameter, bad_diam, "wrong diameter on cells:");
  if (!open.empty()) fail(MeshCheck::open_loop, open, "open edge loops on cells:");

  std::vector<int> non_manifold, mismatch;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.cells.empty() || edge.cells.size() > 2) {
      non_manifold.push_back(e);
      continue;
    }
    if (edge.cells.size() == 2) {
      int signs[2] = {0, 0};
      for (int s = 0; s < 2; ++s) {
        for (const auto& ce : mesh.cell_edges(edge.cells[s]))
          if (ce.edge == e) signs[s] = ce.sign;
      }
      if (signs[0] + signs[1] != 0) mismatch.push_back(e);
    }
  }
  if (!non_manifold.empty())
    fail(MeshCheck::non_manifold_edge, non_manifold, "edges not shared by 1 or 2 cells:");
  if (!mismatch.empty())
    fail(MeshCheck::normal_mismatch, mismatch, "interior edges with parallel normals:");

  if (expected_area > 0) {
    const double total = mesh.total_area();
    if (std::abs(total - expected_area) > 1e-12 * expected_area) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "cell areas sum to " << total << ", expected " << expected_area;
      report.failures.push_back({MeshCheck::tiling, {}, msg.str()});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

PolyFamily parse_poly_family(std::string_view name)
{
  if (name == "A" || name == "a") return PolyFamily::A;
  if (name == "B" || name == "b") return PolyFamily::B;
  throw InvalidArgument("unknown polygonal mesh family '" + std::string(name) + "'");
}

MeshFamily parse_mesh_family(std::string_view name)
{
  if (name == "tri") return MeshFamily::tri;
  if (name == "polyA") return MeshFamily::polyA;
  if (name == "polyB") return MeshFamily::polyB;
  if (name == "disk") return MeshFamily::disk;
  throw InvalidArgument("unknown mesh family '" + std::string(name) + "'");
}

std::string_view to_string(MeshFamily family)
{
  switch (family) {
    case MeshFamily::tri: return "tri";
    case MeshFamily::polyA: return "polyA";
    case MeshFamily::polyB: return "polyB";
    case MeshFamily::disk: return "disk";
  }
  return "unknown";
}

Mesh generate_triangular_mesh(int n)
{
  if (n < 1) throw InvalidArgument("generate_triangular_mesh: n must be >= 1");
  std::vector<Point2d> pts;
  pts.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) pts.emplace_back(double(i) / n, double(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<std::vector<int>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  Mesh mesh = Mesh::from_polygons(std::move(pts), std::move(cells));
  require_valid(mesh, "generate_triangular_mesh");
  return mesh;
}

Mesh generate_nonconvex_polygonal_mesh(int n, PolyFamily family)
{
  if (n < 1) throw InvalidArgument("generate_nonconvex_polygonal_mesh: n must be >= 1");

  // Zigzag cut from the bottom midpoint to the top midpoint of a unit macro
  // square. The cut is point-symmetric about the square center, so the two
  // halves are congruent under a half-turn.
  std::vector<Point2d> cut;
  switch (family) {
    case PolyFamily::A:
      cut = {{0.5, 0.0}, {0.25, 0.4}, {0.75, 0.6}, {0.5, 1.0}};
      break;
    case PolyFamily::B:
      cut = {{0.5, 0.0}, {0.3, 0.2}, {0.35, 0.45}, {0.65, 0.55}, {0.7, 0.8}, {0.5, 1.0}};
      break;
  }

  VertexPool pool;
  std::vector<std::vector<int>> cells;
  cells.reserve(2 * n * n);
  const double h = 1.0 / n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      auto map = [&](const Point2d& p) { return pool.add(Point2d((i + p.x()) * h, (j + p.y()) * h)); };
      std::vector<int> left{map({0.0, 0.0})};
      for (const auto& p : cut) left.push_back(map(p));
      left.push_back(map({0.0, 1.0}));

      std::vector<int> right{map({1.0, 0.0}), map({1.0, 1.0})};
      for (auto it = cut.rbegin(); it != cut.rend(); ++it) right.push_back(map(*it));
      cells.push_back(std::move(left));
      cells.push_back(std::move(right));
    }
  }
  Mesh mesh = Mesh::from_polygons(pool.take(), std::move(cells));
  require_valid(mesh, "generate_nonconvex_polygonal_mesh");
  return mesh;
}

Mesh generate_disk_mesh(int n)
{
  if (n < 1) throw InvalidArgument("generate_disk_mesh: n must be >= 1");
  // Ring i (1..n) carries 6i equally spaced vertices at radius i/n; the
  // outer ring lies exactly on the unit circle.
  std::vector<Point2d> pts{Point2d::Zero()};
  std::vector<int> ring_start{0};
  for (int i = 1; i <= n; ++i) {
    ring_start.push_back(static_cast<int>(pts.size()));
    const double r = double(i) / n;
    for (int a = 0; a < 6 * i; ++a) {
      const double phi = 2.0 * std::numbers::pi * a / (6.0 * i);
      if (i == n)
        pts.emplace_back(std::cos(phi), std::sin(phi));
      else
        pts.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
  }
  auto ring = [&](int i, int a) {
    if (i == 0) return 0;
    return ring_start[i] + (a % (6 * i));
  };

  std::vector<std::vector<int>> cells;
  auto add = [&](int a, int b, int c) {
    const double s = cross2<double>(pts[b] - pts[a], pts[c] - pts[a]);
    if (s > 0)
      cells.push_back({a, b, c});
    else
      cells.push_back({a, c, b});
  };
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < 6; ++s) {
      for (int a = 0; a < i; ++a) {
        const int in0 = ring(i, s * i + a), in1 = ring(i, s * i + a + 1);
        const int out0 = ring(i + 1, s * (i + 1) + a), out1 = ring(i + 1, s * (i + 1) + a + 1);
        add(in0, out0, out1);
        add(in0, out1, in1);
      }
      add(ring(i, s * i + i), ring(i + 1, s * (i + 1) + i), ring(i + 1, s * (i + 1) + i + 1));
    }
  }
  Mesh mesh = Mesh::from_polygons(std::move(pts), std::move(cells));
  require_valid(mesh, "generate_disk_mesh");
  return mesh;
}

Mesh generate_mesh(MeshFamily family, int n)
{
  switch (family) {
    case MeshFamily::tri: return generate_triangular_mesh(n);
    case MeshFamily::polyA: return generate_nonconvex_polygonal_mesh(n, PolyFamily::A);
    case MeshFamily::polyB: return generate_nonconvex_polygonal_mesh(n, PolyFamily::B);
    case MeshFamily::disk: return generate_disk_mesh(n);
  }
  throw InvalidArgument("generate_mesh: unknown family");
}

double domain_area(MeshFamily family, int n)
{
  if (family == MeshFamily::disk) return 3.0 * n * std::sin(std::numbers::pi / (3.0 * n));
  return 1.0;
}

}  // namespace wgplate
