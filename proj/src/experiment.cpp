#include "wgplate/experiment.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace wgplate {

std::vector<int> ExperimentConfig::levels() const
{
  std::vector<int> out;
  for (int l = level_min; l <= level_max; ++l) out.push_back(l);
  return out;
}

WeakSpaceConfig resolve_preset(const std::string& name, MeshFamily family)
{
  if (name.size() < 2 || (name[0] != 'P' && name[0] != 'R'))
    throw UsageError("preset: expected P<k> or R<k>, got '" + name + "'");
  int k = 0;
  try {
    std::size_t used = 0;
    k = std::stoi(name.substr(1), &used);
    if (used != name.size() - 1) throw std::invalid_argument(name);
  } catch (const std::exception&) {
    throw UsageError("preset: bad degree in '" + name + "'");
  }
  if (k < 1) throw UsageError("preset: degree must be >= 1 in '" + name + "'");
  if (name[0] == 'P') return table_preset(k, family);
  // Largest edge count per family: triangles 3, A hexagons 6, B octagons 8.
  switch (family) {
    case MeshFamily::tri:
    case MeshFamily::disk: return conservative_preset(k, 3, true);
    case MeshFamily::polyA: return conservative_preset(k, 6, false);
    case MeshFamily::polyB: return conservative_preset(k, 8, false);
  }
  throw InternalError("resolve_preset: unhandled family");
}

namespace {

void parse_levels(const std::string& text, ExperimentConfig& cfg)
{
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      cfg.level_min = cfg.level_max = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
      cfg.level_min = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(text);
      cfg.level_max = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw UsageError("levels: expected 'a..b' or a single level, got '" + text + "'");
  }
  if (cfg.level_min < 0 || cfg.level_max < cfg.level_min || cfg.level_max > 10)
    throw UsageError("levels: need 0 <= a <= b <= 10, got '" + text + "'");
}

std::string format_thickness(double t)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::vector<std::string>& args)
{
  CLI::App app{"Weak Galerkin Reissner-Mindlin plate solver", "wg_plate"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "key = value file using the long flag names");

  ExperimentConfig cfg;
  std::string mesh = "tri", levels = "2..4", solver = "direct", bc = "exact", l2 = "interior";
  std::optional<int> k, p, r1, q, m, r2;
  app.add_option("--problem", cfg.problem, "manufactured problem (1 = square, 2 = disk)")
      ->check(CLI::IsMember({1, 2}));
  app.add_option("--mesh", mesh, "mesh family: tri, polyA, polyB, disk");
  app.add_option("--levels", levels, "refinement levels a..b, n = 2^level");
  app.add_option("--preset", cfg.preset, "P1, P2, P3 (table degrees) or R<k> (conservative rule)");
  app.add_option("--k", k, "interior displacement degree");
  app.add_option("--p", p, "edge displacement degree");
  app.add_option("--r1", r1, "weak gradient degree");
  app.add_option("--q", q, "interior rotation degree");
  app.add_option("--m", m, "edge rotation degree");
  app.add_option("--r2", r2, "weak symmetric gradient degree");
  app.add_option("--t", cfg.thicknesses, "plate thickness list")->expected(1, -1);
  app.add_option("--solver", solver, "direct or cg");
  app.add_option("--bc", bc, "boundary data: exact (edge projection of the exact traces) or zero");
  app.add_option("--l2", l2, "L2 error of interior parts only (interior) or with edge parts (edges)");
  app.add_option("--out", cfg.out, "output stem for <stem>_t<t>.csv and <stem>.md");
  app.add_option("--dump-mesh", cfg.dump_mesh, "write the finest mesh to this file");
  app.add_option("--dump-matrix", cfg.dump_matrix, "write the finest reduced matrix (lower triangle)");
  app.add_option("--seed", cfg.seed, "seed for randomized checks");
  app.add_option("--threads", cfg.threads, "worker count for per-cell loops (0 = default)")
      ->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  if (!app.remaining().empty()) throw UsageError("unexpected argument '" + app.remaining().front() + "'");

  try {
    cfg.family = parse_mesh_family(mesh);
    cfg.solver = parse_solver_method(solver);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (bc == "exact")
    cfg.boundary = BoundaryData::exact_trace;
  else if (bc == "zero")
    cfg.boundary = BoundaryData::zero;
  else
    throw UsageError("bc: expected exact or zero, got '" + bc + "'");
  if (l2 == "interior")
    cfg.l2 = L2Mode::interior;
  else if (l2 == "edges")
    cfg.l2 = L2Mode::with_edges;
  else
    throw UsageError("l2: expected interior or edges, got '" + l2 + "'");
  parse_levels(levels, cfg);
  for (double t : cfg.thicknesses)
    if (!(t > 0)) throw UsageError("t: thickness must be positive");

  if (cfg.problem == 1 && cfg.family == MeshFamily::disk)
    throw UsageError("mesh: problem 1 lives on the unit square (tri, polyA, polyB)");
  if (cfg.problem == 2 && cfg.family != MeshFamily::disk)
    throw UsageError("mesh: problem 2 lives on the unit disk (disk)");

  if (!cfg.preset.empty()) {
    if (k) throw UsageError("k: give either --preset or --k, not both");
    cfg.degrees = resolve_preset(cfg.preset, cfg.family);
  } else {
    cfg.degrees = table_preset(k.value_or(1), cfg.family);
  }
  if (p) cfg.degrees.p = *p;
  if (r1) cfg.degrees.r1 = *r1;
  if (q) cfg.degrees.q = *q;
  if (m) cfg.degrees.m = *m;
  if (r2) cfg.degrees.r2 = *r2;
  for (int d : {cfg.degrees.k, cfg.degrees.p, cfg.degrees.r1, cfg.degrees.q, cfg.degrees.m, cfg.degrees.r2})
    if (d < 0) throw UsageError("degrees must be non-negative");
  return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log)
{
  using clock = std::chrono::steady_clock;
  ExperimentResult result;
  result.config = config;
  for (double t : config.thicknesses) result.runs.push_back({t, {}, {}});

  for (int level : config.levels()) {
    const int n = 1 << level;
    const auto start = clock::now();
    const Mesh mesh = generate_mesh(config.family, n);
    const Discretization disc = discretize(mesh, config.degrees, config.threads);
    const double build_seconds = std::chrono::duration<double>(clock::now() - start).count();
    const bool finest = level == config.level_max;
    if (finest && !config.dump_mesh.empty()) {
      std::ofstream os(config.dump_mesh);
      if (!os) throw InvalidArgument("cannot open '" + config.dump_mesh + "' for writing");
      write_mesh(os, mesh);
    }

    for (std::size_t i = 0; i < config.thicknesses.size(); ++i) {
      PlateParams params;
      params.t = config.thicknesses[i];
      const Problem problem = make_problem(config.problem, params);

      const auto t0 = clock::now();
      const GlobalSystem sys = assemble_system(disc, problem, params, config.threads);
      const ReducedSystem red = apply_essential_bc(sys, disc, problem, config.boundary);
      LevelStats stats;
      stats.level = level;
      stats.n = n;
      stats.cells = mesh.n_cells();
      stats.dofs = sys.dofs.size();
      stats.free_dofs = static_cast<int>(red.free_dofs.size());
      stats.assembly_seconds = build_seconds + std::chrono::duration<double>(clock::now() - t0).count();
      if (finest && i == 0 && !config.dump_matrix.empty()) {
        std::ofstream os(config.dump_matrix);
        if (!os) throw InvalidArgument("cannot open '" + config.dump_matrix + "' for writing");
        write_matrix_lower(os, red.A);
      }

      const SolveResult solved = solve_spd(red.A, red.F, config.solver);
      stats.solve = solved.report;
      ErrorRow row = compute_errors(disc, red.expand(solved.x), problem, params, config.l2);
      row.level = level;
      row.n = n;
      auto& run = result.runs[i];
      run.rows.push_back(row);
      run.stats.push_back(stats);
      if (log) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "level %d n=%d t=%s cells=%d dofs=%d free=%d assembly=%.2fs solve=%.2fs (%s) residual=%.1e "
                      "errE_w=%.3e errE_th=%.3e\n",
                      level, n, format_thickness(params.t).c_str(), stats.cells, stats.dofs, stats.free_dofs,
                      stats.assembly_seconds, stats.solve.seconds, stats.solve.backend.c_str(),
                      stats.solve.relative_residual, row.errE_w, row.errE_theta);
        *log << buf << std::flush;
      }
    }
  }
  for (auto& run : result.runs) convergence_orders(run.rows);
  return result;
}

namespace {

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string ord(const std::optional<double>& o)
{
  if (!o) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *o);
  return buf;
}

// Paper-style mantissa in [0.1, 1): 0.422E-03.
std::string table_sci(double v)
{
  if (!(v > 0)) return sci(v);
  int e = static_cast<int>(std::floor(std::log10(v))) + 1;
  double mant = v / std::pow(10.0, e);
  if (mant >= 0.9995) {
    mant /= 10;
    ++e;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fE%+03d", mant, e);
  return buf;
}

std::string ord1(const std::optional<double>& o)
{
  if (!o) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *o);
  return buf;
}

}  // namespace

void write_csv(std::ostream& os, const ThicknessRun& run)
{
  os << "level,h,errL2_w,ord,errE_w,ord,errL2_th,ord,errE_th,ord,shear,ord\n";
  for (const auto& r : run.rows) {
    os << r.level << ',' << sci(r.h);
    for (int j = 0; j < ErrorRow::n_errors; ++j) os << ',' << sci(r.error(j)) << ',' << ord(r.order[j]);
    os << '\n';
  }
}

void write_markdown(std::ostream& os, const ExperimentResult& result)
{
  const auto& cfg = result.config;
  os << "# Problem " << cfg.problem << ", " << to_string(cfg.family) << " meshes, " << cfg.degrees.label() << "\n\n";
  for (const auto& run : result.runs) {
    os << "## t = " << format_thickness(run.t) << "\n\n";
    os << "| G_i | ‖Q_h w − w_h‖ | O(h^r) | \\|\\|\\|Q_h w − w_h\\|\\|\\|_W | O(h^r) |\n";
    os << "|---:|---:|---:|---:|---:|\n";
    for (const auto& r : run.rows)
      os << "| " << r.level << " | " << table_sci(r.errL2_w) << " | " << ord1(r.order[0]) << " | "
         << table_sci(r.errE_w) << " | " << ord1(r.order[1]) << " |\n";
    os << "\n| G_i | ‖Q_h θ − θ_h‖ | O(h^r) | \\|\\|\\|Q_h θ − θ_h\\|\\|\\|_Θ | O(h^r) |\n";
    os << "|---:|---:|---:|---:|---:|\n";
    for (const auto& r : run.rows)
      os << "| " << r.level << " | " << table_sci(r.errL2_theta) << " | " << ord1(r.order[2]) << " | "
         << table_sci(r.errE_theta) << " | " << ord1(r.order[3]) << " |\n";
    os << '\n';
  }
}

std::vector<std::string> write_outputs(const ExperimentResult& result)
{
  std::vector<std::string> paths;
  const std::string& stem = result.config.out;
  if (stem.empty()) return paths;
  for (const auto& run : result.runs) {
    const std::string path = stem + "_t" + format_thickness(run.t) + ".csv";
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidArgument("cannot open '" + path + "' for writing");
    write_csv(os, run);
    paths.push_back(path);
  }
  const std::string md = stem + ".md";
  std::ofstream os(md, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open '" + md + "' for writing");
  write_markdown(os, result);
  paths.push_back(md);
  return paths;
}

}  // namespace wgplate
