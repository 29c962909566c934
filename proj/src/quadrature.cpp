#include "wgplate/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace wgplate {

LineRule gauss_legendre(int n)
{
  if (n < 1 || n > max_gauss_points)
    throw UnsupportedDegree("gauss_legendre: point count " + std::to_string(n) + " outside [1, " +
                            std::to_string(max_gauss_points) + "]");
  LineRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.exact_degree = 2 * n - 1;
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.5;
  return rule;
}

LineRule line_rule(int degree)
{
  if (degree < 0) throw UnsupportedDegree("line_rule: negative degree");
  const int n = (degree + 2) / 2;  // ceil((d + 1) / 2)
  LineRule rule = gauss_legendre(n);
  return rule;
}

QuadratureRule triangle_rule(int degree)
{
  if (degree < 0 || degree > max_triangle_degree)
    throw UnsupportedDegree("triangle_rule: degree " + std::to_string(degree) + " outside [0, " +
                            std::to_string(max_triangle_degree) + "]");
  QuadratureRule rule;
  rule.exact_degree = degree;
  if (degree <= 1) {
    rule.points = {Point2d(1.0 / 3.0, 1.0 / 3.0)};
    rule.weights = {0.5};
    return rule;
  }
  if (degree == 2) {
    rule.points = {Point2d(1.0 / 6.0, 1.0 / 6.0), Point2d(2.0 / 3.0, 1.0 / 6.0), Point2d(1.0 / 6.0, 2.0 / 3.0)};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
  }
  // Collapsed map (u, v) -> (u (1 - v), v) with Jacobian (1 - v): the
  // pulled-back integrand has degree d in u and d + 1 in v.
  const LineRule gu = line_rule(degree);
  const LineRule gv = line_rule(degree + 1);
  rule.points.reserve(gu.size() * gv.size());
  rule.weights.reserve(gu.size() * gv.size());
  for (std::size_t j = 0; j < gv.size(); ++j) {
    const double v = gv.points[j];
    for (std::size_t i = 0; i < gu.size(); ++i) {
      const double u = gu.points[i];
      rule.points.emplace_back(u * (1.0 - v), v);
      rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - v));
    }
  }
  return rule;
}

namespace {

bool point_in_triangle(const Point2d& p, const Point2d& a, const Point2d& b, const Point2d& c)
{
  const double d1 = cross2<double>(b - a, p - a);
  const double d2 = cross2<double>(c - b, p - b);
  const double d3 = cross2<double>(a - c, p - c);
  return d1 >= 0 && d2 >= 0 && d3 >= 0;
}

}  // namespace

std::vector<Triangle> triangulate_cell(const std::vector<Point2d>& polygon)
{
  const std::size_t n = polygon.size();
  if (n < 3) throw InvalidArgument("triangulate_cell: polygon needs at least 3 vertices");
  if (polygon_self_intersects(polygon)) throw InvalidArgument("triangulate_cell: polygon is self-intersecting");
  if (signed_area(polygon) <= 0) throw InvalidArgument("triangulate_cell: polygon is not counterclockwise");

  std::vector<Triangle> out;
  out.reserve(n - 2);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;

  while (idx.size() > 3) {
    const std::size_t m = idx.size();
    bool clipped = false;
    for (std::size_t i = 0; i < m && !clipped; ++i) {
      const Point2d& a = polygon[idx[(i + m - 1) % m]];
      const Point2d& b = polygon[idx[i]];
      const Point2d& c = polygon[idx[(i + 1) % m]];
      if (cross2<double>(b - a, c - b) <= 0) continue;  // reflex or flat
      bool empty = true;
      for (std::size_t j = 0; j < m && empty; ++j) {
        if (j == i || j == (i + 1) % m || j == (i + m - 1) % m) continue;
        const Point2d& p = polygon[idx[j]];
        if (p == a || p == b || p == c) continue;
        if (point_in_triangle(p, a, b, c)) empty = false;
      }
      if (!empty) continue;
      out.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
    }
    if (!clipped) throw InvalidArgument("triangulate_cell: no ear found (degenerate polygon)");
  }
  out.push_back({polygon[idx[0]], polygon[idx[1]], polygon[idx[2]]});
  return out;
}

QuadratureRule polygon_rule(const std::vector<Point2d>& polygon, int degree)
{
  const QuadratureRule ref = triangle_rule(degree);
  QuadratureRule rule;
  rule.exact_degree = degree;
  const auto tris = triangulate_cell(polygon);
  rule.points.reserve(tris.size() * ref.size());
  rule.weights.reserve(tris.size() * ref.size());
  for (const auto& t : tris) {
    const Point2d e1 = t[1] - t[0];
    const Point2d e2 = t[2] - t[0];
    const double jac = cross2(e1, e2);  // 2 * area
    for (std::size_t q = 0; q < ref.size(); ++q) {
      rule.points.emplace_back(t[0] + ref.points[q].x() * e1 + ref.points[q].y() * e2);
      rule.weights.push_back(ref.weights[q] * jac);
    }
  }
  return rule;
}

QuadratureRule cell_rule(const Mesh& mesh, int cell, int degree)
{
  return polygon_rule(mesh.cell_polygon(cell), degree);
}

}  // namespace wgplate
