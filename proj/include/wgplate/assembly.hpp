#pragma once

#include "wgplate/mesh.hpp"
#include "wgplate/rm_model.hpp"
#include "wgplate/weakops.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <iosfwd>
#include <vector>

namespace wgplate {

using SparseMatrixd = Eigen::SparseMatrix<double>;

/// Global numbering: all displacement DOFs (cell interiors, then edges),
/// then all rotation DOFs (cell interiors, then edges). Edge DOFs are
/// shared by the incident cells.
class DofMap
{
public:
  DofMap() = default;
  DofMap(const Mesh& mesh, const WeakSpaceConfig& config);

  int n_w() const { return n_w_; }
  int n_theta() const { return n_theta_; }
  int size() const { return n_w_ + n_theta_; }

  int w_cell(int cell) const { return cell * dim_k_; }
  int w_edge(int edge) const { return n_cells_ * dim_k_ + edge * dim_p_; }
  int theta_cell(int cell) const { return n_w_ + cell * 2 * dim_q_; }
  int theta_edge(int edge) const { return n_w_ + n_cells_ * 2 * dim_q_ + edge * 2 * dim_m_; }

  /// Global index of every local DOF of a cell, in LocalDofLayout order
  /// (displacement block followed by rotation block).
  std::vector<int> cell_dofs(const Mesh& mesh, int cell) const;

  /// Sorted DOFs on boundary edges (both fields).
  const std::vector<int>& constrained() const { return constrained_; }

private:
  int n_cells_ = 0;
  int dim_k_ = 0, dim_p_ = 0, dim_q_ = 0, dim_m_ = 0;
  int n_w_ = 0, n_theta_ = 0;
  std::vector<int> constrained_;
};

/// Mesh, degrees, numbering and per-cell operators, built once per level.
struct Discretization
{
  const Mesh* mesh = nullptr;
  WeakSpaceConfig config;
  DofMap dofs;
  std::vector<LocalOperators> ops;
};

/// Worker count for per-cell loops: WG_PLATE_THREADS when set, otherwise
/// the hardware concurrency.
int default_thread_count();

/// Runs body(cell) for every cell on up to `threads` workers.
void parallel_for_cells(int n_cells, int threads, const std::function<void(int)>& body);

Discretization discretize(const Mesh& mesh, const WeakSpaceConfig& config, int threads = 0);

/// Symmetric local block over [w DOFs | theta DOFs]:
///   E^T M_C E  (bending, theta x theta)
/// + lambda t^-2 [G | -Pint]^T M_r1 [G | -Pint]  (shear)
/// + S  (stabilizer, w x w)
MatrixXd local_stiffness(const LocalOperators& ops, const PlateParams& params);

struct GlobalSystem
{
  SparseMatrixd A;  // both triangles stored
  VectorXd F;
  DofMap dofs;
};

GlobalSystem assemble_system(const Discretization& disc, const Problem& problem, const PlateParams& params,
                             int threads = 0);
GlobalSystem assemble_system(const Mesh& mesh, const WeakSpaceConfig& config, const Problem& problem,
                             const PlateParams& params);

enum class BoundaryData
{
  exact_trace,  // L2 edge projection of the exact w and theta
  zero,         // homogeneous clamping on the mesh boundary
};

/// Boundary DOF values for the chosen boundary data, as a full-length vector
/// that is zero away from the constrained set.
VectorXd boundary_values(const Discretization& disc, const Problem& problem, BoundaryData mode);

struct ReducedSystem
{
  SparseMatrixd A;
  VectorXd F;
  std::vector<int> free_dofs;  // reduced index -> global index
  VectorXd constrained_values;  // full length; zero on free DOFs

  /// Scatters a reduced solution into a full DOF vector.
  VectorXd expand(const VectorXd& reduced) const;
};

/// Symmetric elimination: F_f - A_fc x_c, then drop constrained rows and columns.
ReducedSystem apply_essential_bc(const GlobalSystem& system, const VectorXd& constrained_values);
ReducedSystem apply_essential_bc(const GlobalSystem& system, const Discretization& disc, const Problem& problem,
                                 BoundaryData mode = BoundaryData::exact_trace);

/// Coordinate dump "i j value", 0-based, lower triangle only.
void write_matrix_lower(std::ostream& os, const SparseMatrixd& A);

}  // namespace wgplate
