#pragma once

#include "wgplate/mesh.hpp"
#include "wgplate/types.hpp"

#include <array>
#include <vector>

namespace wgplate {

/// Points and weights; on a reference element the weights sum to its
/// measure, on a physical cell to the cell area.
struct QuadratureRule
{
  std::vector<Point2d> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// 1-D rule on [0, 1].
struct LineRule
{
  std::vector<double> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return weights.size(); }
};

using Triangle = std::array<Point2d, 3>;

inline constexpr int max_triangle_degree = 20;
inline constexpr int max_gauss_points = 32;

/// Gauss-Legendre rule with `n` points mapped to [0, 1].
LineRule gauss_legendre(int n);

/// Minimal Gauss-Legendre rule exact for degree d on [0, 1].
LineRule line_rule(int degree);

/// Rule on the reference triangle (0,0)(1,0)(0,1) exact to total degree d.
/// Degrees 0-2 use the classical symmetric rules; higher degrees use a
/// collapsed Gauss product rule with positive weights.
QuadratureRule triangle_rule(int degree);

/// Ear-clipping triangulation of a simple counterclockwise polygon (convex
/// or not). Throws InvalidArgument for self-intersecting or clockwise input.
std::vector<Triangle> triangulate_cell(const std::vector<Point2d>& polygon);

/// Physical-coordinate rule over a polygon: triangle_rule(degree) pushed
/// forward onto every ear-clipped triangle.
QuadratureRule polygon_rule(const std::vector<Point2d>& polygon, int degree);
QuadratureRule cell_rule(const Mesh& mesh, int cell, int degree);

template<typename F>
double integrate(const QuadratureRule& rule, F&& f)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.points[i]);
  return sum;
}

template<typename F>
double integrate_cell(const std::vector<Point2d>& polygon, F&& f, int degree)
{
  return integrate(polygon_rule(polygon, degree), f);
}

template<typename F>
double integrate_cell(const Mesh& mesh, int cell, F&& f, int degree)
{
  return integrate(cell_rule(mesh, cell, degree), f);
}

/// Integral over the straight segment [a, b] with respect to arc length.
template<typename F>
double integrate_edge(const Point2d& a, const Point2d& b, F&& f, int degree)
{
  const LineRule rule = line_rule(degree);
  const double len = (b - a).norm();
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    sum += rule.weights[i] * f(Point2d(a + rule.points[i] * (b - a)));
  return len * sum;
}

template<typename F>
double integrate_edge(const Mesh& mesh, int edge, F&& f, int degree)
{
  const Edge& e = mesh.edge(edge);
  return integrate_edge(mesh.vertex(e.endpoints[0]), mesh.vertex(e.endpoints[1]), f, degree);
}

}  // namespace wgplate
