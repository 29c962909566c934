#pragma once

#include "wgplate/mesh.hpp"
#include "wgplate/types.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>

namespace wgplate {

/// Isotropic plate material and thickness.
struct PlateParams
{
  double E = 1.092;
  double nu = 0.3;
  double kappa = 5.0 / 6.0;
  double t = 1.0;

  /// Bending stiffness E / (12 (1 - nu^2)).
  double D() const { return E / (12.0 * (1.0 - nu * nu)); }
  /// Shear modulus with correction, E kappa / (2 (1 + nu)).
  double lambda() const { return E * kappa / (2.0 * (1.0 + nu)); }
  /// Shear coefficient lambda t^-2 multiplying the shear energy.
  double shear_factor() const { return lambda() / (t * t); }

  void check() const;
};

/// C sigma = D [(1 - nu) sigma + nu tr(sigma) I] on a Voigt (11, 22, 12) tensor.
template<typename Scalar>
Voigt<Scalar> apply_bending_tensor(const Voigt<Scalar>& sigma, const PlateParams& params)
{
  const Scalar d = params.D();
  const Scalar nu = params.nu;
  const Scalar tr = sigma[0] + sigma[1];
  Voigt<Scalar> out;
  out[0] = d * ((1 - nu) * sigma[0] + nu * tr);
  out[1] = d * ((1 - nu) * sigma[1] + nu * tr);
  out[2] = d * (1 - nu) * sigma[2];
  return out;
}

/// Matrix of apply_bending_tensor acting on Voigt coefficients.
Eigen::Matrix3d bending_voigt_matrix(const PlateParams& params);

/// Frobenius product of two Voigt tensors (12 entry weighted by 2).
template<typename Scalar>
Scalar voigt_dot(const Voigt<Scalar>& a, const Voigt<Scalar>& b)
{
  return a[0] * b[0] + a[1] * b[1] + Scalar(2) * a[2] * b[2];
}

enum class Domain
{
  unit_square,
  unit_disk,
};

/// Manufactured Reissner-Mindlin solution with its load. `shear` is
/// gamma = lambda t^-2 (grad w - theta), supplied in closed form so that
/// thin-plate evaluations do not cancel.
struct Problem
{
  int id = 0;
  std::string name;
  Domain domain = Domain::unit_square;
  std::function<double(const Point2d&)> w;
  std::function<Point2d(const Point2d&)> grad_w;
  std::function<Point2d(const Point2d&)> theta;
  std::function<Point2d(const Point2d&)> shear;
  std::function<double(const Point2d&)> load;
  // Polynomial degrees of the data (-1 when not polynomial); they size
  // the quadrature used to project or integrate them.
  int w_degree = -1;
  int theta_degree = -1;
  int load_degree = -1;
};

/// Clamped unit square, polynomial solution.
Problem problem1(const PlateParams& params);
/// Clamped unit disk, unit load.
Problem problem2(const PlateParams& params);
Problem make_problem(int id, const PlateParams& params);

}  // namespace wgplate
