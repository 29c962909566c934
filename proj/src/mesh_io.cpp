#include "wgplate/mesh.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace wgplate {

void write_mesh(std::ostream& os, const Mesh& mesh)
{
  const auto old_precision = os.precision(17);
  os << mesh.n_vertices() << ' ' << mesh.n_cells() << ' ' << mesh.n_edges() << '\n';
  for (const auto& v : mesh.vertices()) os << v.x() << ' ' << v.y() << '\n';
  for (const auto& c : mesh.cells()) {
    os << c.vertices.size();
    for (int v : c.vertices) os << ' ' << v;
    os << '\n';
  }
  os.precision(old_precision);
}

Mesh read_mesh(std::istream& is)
{
  long nv = -1, nc = -1, ne = -1;
  if (!(is >> nv >> nc >> ne) || nv < 0 || nc < 0 || ne < 0)
    throw InvalidArgument("read_mesh: malformed header, expected 'NV NC NE'");

  std::vector<Point2d> pts(nv);
  for (long i = 0; i < nv; ++i) {
    if (!(is >> pts[i].x() >> pts[i].y()))
      throw InvalidArgument("read_mesh: truncated vertex list at vertex " + std::to_string(i));
  }
  std::vector<std::vector<int>> cells(nc);
  for (long c = 0; c < nc; ++c) {
    int k = 0;
    if (!(is >> k) || k < 3) throw InvalidArgument("read_mesh: bad vertex count on cell " + std::to_string(c));
    cells[c].resize(k);
    for (int& v : cells[c]) {
      if (!(is >> v) || v < 0 || v >= nv)
        throw InvalidArgument("read_mesh: bad vertex index on cell " + std::to_string(c));
    }
  }
  Mesh mesh = Mesh::from_polygons(std::move(pts), std::move(cells));
  if (mesh.n_edges() != ne)
    throw InvalidArgument("read_mesh: header declares " + std::to_string(ne) + " edges, cells define " +
                          std::to_string(mesh.n_edges()));
  return mesh;
}

}  // namespace wgplate
