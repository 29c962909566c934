#pragma once

#include "wgplate/assembly.hpp"

#include <optional>
#include <vector>

namespace wgplate {

/// (Q_h w, Q_h theta): cellwise and edgewise L2 projections of the exact
/// fields in the global DOF layout.
VectorXd project_exact(const Discretization& disc, const Problem& problem);

/// |||v|||_{W_h} = (grad_w v, grad_w v)^{1/2} of the w block of a DOF vector.
double energy_norm_w(const Discretization& disc, const VectorXd& dofs);
/// |||eta|||_{Theta_h} = (eps_w eta, eps_w eta)^{1/2} of the theta block.
double energy_norm_theta(const Discretization& disc, const VectorXd& dofs);

enum class L2Mode
{
  interior,        // ||v_0|| only
  with_edges,      // (||v_0||^2 + sum_T h_T ||v_b||^2_{dT})^{1/2}
};

double l2_norm_w(const Discretization& disc, const VectorXd& dofs, L2Mode mode = L2Mode::interior);
double l2_norm_theta(const Discretization& disc, const VectorXd& dofs, L2Mode mode = L2Mode::interior);

/// lambda^{-1/2} t ||gamma - gamma_h|| with gamma_h = lambda t^-2 (grad_w w_h - Q_r1 theta_0).
double shear_error(const Discretization& disc, const VectorXd& dofs, const Problem& problem,
                   const PlateParams& params);

struct ErrorRow
{
  int level = 0;
  int n = 0;
  double h = 0;
  double errL2_w = 0, errE_w = 0, errL2_theta = 0, errE_theta = 0, err_shear = 0;

  static constexpr int n_errors = 5;
  double error(int i) const;
  std::optional<double> order[n_errors];  // vs the previous row; empty when undefined
};

/// All error columns of a computed solution against the projected exact one.
ErrorRow compute_errors(const Discretization& disc, const VectorXd& solution, const Problem& problem,
                        const PlateParams& params, L2Mode mode = L2Mode::interior);

/// order_i = log(e_{i-1} / e_i) / log(h_{i-1} / h_i); left empty when either
/// error is not positive or the mesh sizes coincide.
std::optional<double> convergence_order(double e_prev, double e, double h_prev, double h);
void convergence_orders(std::vector<ErrorRow>& rows);

}  // namespace wgplate
