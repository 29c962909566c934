#pragma once

#include "wgplate/assembly.hpp"
#include "wgplate/postproc.hpp"
#include "wgplate/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wgplate {

/// One refinement sweep. Level l runs on the mesh with n = 2^l subdivisions
/// (rings for the disk).
struct ExperimentConfig
{
  int problem = 1;
  MeshFamily family = MeshFamily::tri;
  int level_min = 2, level_max = 4;
  std::string preset;              // P<k> (table degrees) or R<k> (conservative rule); empty = explicit
  WeakSpaceConfig degrees;         // resolved tuple
  std::vector<double> thicknesses{1.0, 0.01};
  SolverMethod solver = SolverMethod::direct;
  BoundaryData boundary = BoundaryData::exact_trace;
  L2Mode l2 = L2Mode::interior;
  std::string out;                 // output stem; empty = no files
  std::string dump_mesh;           // finest mesh, plain-text format
  std::string dump_matrix;         // finest reduced matrix, first thickness
  unsigned seed = 1;
  int threads = 0;                 // 0 = default_thread_count()

  std::vector<int> levels() const;
};

/// Parses flags (argv without the program name). `--config FILE` reads
/// `key = value` lines with the same keys as the long flags; flags win.
/// Throws UsageError naming the offending key or value.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Degrees for a preset name on a family: "P<k>" or "R<k>".
WeakSpaceConfig resolve_preset(const std::string& name, MeshFamily family);

struct LevelStats
{
  int level = 0, n = 0;
  int cells = 0, dofs = 0, free_dofs = 0;
  SolveReport solve;
  double assembly_seconds = 0;
};

struct ThicknessRun
{
  double t = 1.0;
  std::vector<ErrorRow> rows;
  std::vector<LevelStats> stats;
};

struct ExperimentResult
{
  ExperimentConfig config;
  std::vector<ThicknessRun> runs;  // in config.thicknesses order
};

/// Builds, solves and measures every level; `log` (may be null) receives one
/// progress line per level and thickness.
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// CSV with columns level,h,errL2_w,ord,errE_w,ord,errL2_th,ord,errE_th,ord,shear,ord.
void write_csv(std::ostream& os, const ThicknessRun& run);
/// Markdown tables, one block per thickness with w and theta sub-blocks.
void write_markdown(std::ostream& os, const ExperimentResult& result);
/// Writes <out>_t<t>.csv per thickness and <out>.md; returns the paths.
std::vector<std::string> write_outputs(const ExperimentResult& result);

}  // namespace wgplate
