#pragma once

#include "wgplate/mesh.hpp"
#include "wgplate/poly.hpp"
#include "wgplate/types.hpp"

#include <string>

namespace wgplate {

/// Degree tuple P_k-P_p-P_r1 / P_q-P_m-P_r2: displacement interior/edge
/// degrees and weak-gradient degree, rotation interior/edge degrees and
/// weak-symmetric-gradient degree.
struct WeakSpaceConfig
{
  int k = 1, p = 1, r1 = 1;
  int q = 1, m = 1, r2 = 2;

  bool operator==(const WeakSpaceConfig&) const = default;
  std::string label() const;  // "P1-P1-P1/P1-P1-P2"
};

/// Default degrees: p = q = m = r1 = k and r2 = k + 1
/// on triangles, k + 2 on polyA, k + 3 on polyB.
WeakSpaceConfig table_preset(int k, MeshFamily family);

/// Conservative rule r1 = r2 = N + k - 1 (convex) or 2N + k - 1
/// (non-convex), N the largest edge count in the mesh.
WeakSpaceConfig conservative_preset(int k, int max_edges, bool convex);

/// Local numbering on one cell. Displacement: interior P_k coefficients,
/// then (p + 1) edge coefficients per edge in cell order. Rotation: x then
/// y interior P_q coefficients, then per edge x then y P_m coefficients.
struct LocalDofLayout
{
  int n_edges = 0;
  int dim_k = 0, dim_p = 0, dim_q = 0, dim_m = 0;

  LocalDofLayout() = default;
  LocalDofLayout(const WeakSpaceConfig& cfg, int n_edges);

  int n_w() const { return dim_k + n_edges * dim_p; }
  int n_theta() const { return 2 * dim_q + n_edges * 2 * dim_m; }
  int w_edge(int local_edge) const { return dim_k + local_edge * dim_p; }
  int theta_interior(int comp) const { return comp * dim_q; }
  int theta_edge(int local_edge, int comp) const { return 2 * dim_q + local_edge * 2 * dim_m + comp * dim_m; }
};

/// Per-cell dense operators on local DOFs.
///   G    : w DOFs -> [P_r1]^2 coefficients of the weak gradient (x block, y block)
///   E    : theta DOFs -> Voigt (11, 22, 12) [P_r2] coefficients of the weak
///          symmetric gradient
///   Pint : theta DOFs -> [P_r1]^2 coefficients of the L2 projection of theta_0
///   S    : stabilizer h_T^-1 <w0 - wb, v0 - vb>_{dT}
struct LocalOperators
{
  WeakSpaceConfig config;
  LocalDofLayout layout;
  MatrixXd G, E, Pint, S;
  MatrixXd mass_r1, mass_r2, mass_k, mass_q;
};

MatrixXd weak_gradient_matrix(const Mesh& mesh, int cell, int k, int p, int r1);
MatrixXd weak_sym_gradient_matrix(const Mesh& mesh, int cell, int q, int m, int r2);
/// Interior theta columns only (2 dim P_q); edge columns of Pint are zero.
MatrixXd interior_projection_matrix(const Mesh& mesh, int cell, int q, int r1);
/// h <= 0 selects the cell diameter.
MatrixXd stabilizer_matrix(const Mesh& mesh, int cell, int k, int p, double h = 0.0);

LocalOperators build_local_operators(const Mesh& mesh, int cell, const WeakSpaceConfig& config);

/// Block-diagonal [M, M] for vector fields and [M, M, 2M] for Voigt tensors.
MatrixXd vector_mass(const MatrixXd& scalar_mass);
MatrixXd voigt_mass(const MatrixXd& scalar_mass);

}  // namespace wgplate
