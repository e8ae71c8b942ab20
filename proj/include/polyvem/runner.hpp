// Batch drivers behind the command-line interface: single solves,
// convergence studies over a mesh family, and space diagnostics.

#ifndef POLYVEM_RUNNER_HPP
#define POLYVEM_RUNNER_HPP

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polyvem/mesh_generators.hpp"
#include "polyvem/mesh_io.hpp"
#include "polyvem/solver.hpp"

namespace polyvem {

struct RunConfig {
  int p1 = 1, p2 = 1, r = 1;
  std::string mesh = "square:2";  // family:level or a mesh file path
  std::string solution = "sin";
  std::string out;                // CSV destination (optional)
  int level_lo = -1, level_hi = -1;
  std::uint64_t seed = 0;
};

struct MeshSpec {
  std::string family;  // empty for a file path
  int level = -1;
  std::string path;
};

inline MeshSpec parse_mesh_spec(const std::string& spec) {
  MeshSpec out;
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  if (head == "square" || head == "perturbed" || head == "hex") {
    out.family = head;
    if (colon != std::string::npos) {
      try {
        out.level = std::stoi(spec.substr(colon + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad mesh level in '" + spec + "'");
      }
      if (out.level < 0) throw ConfigError("bad mesh level in '" + spec + "'");
    }
    return out;
  }
  out.path = spec;
  return out;
}

inline Mesh realize_mesh(const MeshSpec& spec, std::uint64_t seed) {
  if (spec.family.empty()) return load_mesh_file(spec.path);
  if (spec.level < 0) throw ConfigError("mesh family '" + spec.family + "' needs a level (family:L)");
  return generate_mesh(spec.family, spec.level, seed);
}

inline bool solution_has_homogeneous_bc(const std::string& name) { return name != "poly-patch"; }

inline std::string csv_header() {
  return "p1,p2,r,mesh,level,h,n_dof,energy_err,h_p1_seminorm_err,l2_err,assemble_s,solve_s\n";
}

inline std::string csv_row(const RunConfig& cfg, const std::string& family, int level,
                           const ErrorReport& rep) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%d,%d,%d,%s,%d,%.12e,%d,%.12e,%.12e,%.12e,%.6f,%.6f\n",
                cfg.p1, cfg.p2, cfg.r, family.c_str(), level, rep.h, rep.n_dofs, rep.energy_error,
                rep.hp1_seminorm_error, rep.l2_error, rep.assemble_seconds, rep.solve_seconds);
  return buf;
}

inline void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) return;
  std::ofstream f(cfg.out, std::ios::trunc);
  if (!f) throw ConfigError("cannot write output file '" + cfg.out + "'");
  f << text;
}

inline ErrorReport solve_one(const SpaceParams& params, const Mesh& mesh,
                             const ManufacturedSolution& sol, bool homogeneous_bc) {
  AssembledProblem problem =
      assemble(mesh, params, [&sol](const Vec2& x) { return sol.source(x); });
  ConstrainedSystem sys = apply_clamped_bcs(problem, homogeneous_bc ? nullptr : &sol);
  SolveResult result = solve(sys);
  ErrorReport rep = error_norms(problem, result.solution, sol);
  rep.assemble_seconds = problem.assemble_seconds;
  rep.solve_seconds = result.solve_seconds;
  rep.residual = result.relative_residual;
  return rep;
}

inline int run_solve(const RunConfig& cfg, std::ostream& log) {
  const SpaceParams params = SpaceParams::make(cfg.p1, cfg.p2, cfg.r);
  const MeshSpec spec = parse_mesh_spec(cfg.mesh);
  const Mesh mesh = realize_mesh(spec, cfg.seed);
  const auto sol = make_solution(cfg.solution, cfg.p1, cfg.r);
  const ErrorReport rep =
      solve_one(params, mesh, *sol, solution_has_homogeneous_bc(cfg.solution));

  char line[512];
  std::snprintf(line, sizeof(line),
                "solve %s mesh=%s solution=%s: h=%.4e n_dof=%d energy_err=%.6e "
                "hp1_err=%.6e l2_err=%.6e residual=%.2e\n",
                params.str().c_str(), cfg.mesh.c_str(), cfg.solution.c_str(), rep.h, rep.n_dofs,
                rep.energy_error, rep.hp1_seminorm_error, rep.l2_error, rep.residual);
  log << line;
  const std::string csv =
      csv_header() + csv_row(cfg, spec.family.empty() ? spec.path : spec.family, spec.level, rep);
  write_output(cfg, csv);
  if (cfg.out.empty()) log << csv;
  return 0;
}

/// Least-squares slope of log(err) against log(h).
inline double fit_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const int n = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(h[static_cast<std::size_t>(i)]);
    const double y = std::log(err[static_cast<std::size_t>(i)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline int run_convergence(const RunConfig& cfg, std::ostream& log) {
  const SpaceParams params = SpaceParams::make(cfg.p1, cfg.p2, cfg.r);
  const MeshSpec spec = parse_mesh_spec(cfg.mesh);
  if (spec.family.empty())
    throw ConfigError("convergence needs a generated mesh family, not a file");
  if (cfg.level_lo < 0 || cfg.level_hi < cfg.level_lo)
    throw ConfigError("convergence needs --levels A..B");
  if (cfg.level_hi - cfg.level_lo + 1 < 3)
    throw ConfigError("convergence needs at least 3 levels");

  const auto sol = make_solution(cfg.solution, cfg.p1, cfg.r);
  std::string csv = csv_header();
  std::vector<double> hs, errs;
  for (int level = cfg.level_lo; level <= cfg.level_hi; ++level) {
    const Mesh mesh = generate_mesh(spec.family, level, cfg.seed);
    const ErrorReport rep =
        solve_one(params, mesh, *sol, solution_has_homogeneous_bc(cfg.solution));
    hs.push_back(rep.h);
    errs.push_back(rep.energy_error);
    csv += csv_row(cfg, spec.family, level, rep);
    char line[256];
    std::snprintf(line, sizeof(line), "level %d: h=%.4e n_dof=%d energy_err=%.6e\n", level, rep.h,
                  rep.n_dofs, rep.energy_error);
    log << line;
  }
  const double slope = fit_slope(hs, errs);
  const int expected = cfg.r - (cfg.p1 - 1);
  char line[256];
  std::snprintf(line, sizeof(line), "measured energy slope %.3f (expected %d)\n", slope, expected);
  log << line;
  char comment[256];
  std::snprintf(comment, sizeof(comment), "# measured_energy_slope %.6f\n# expected_energy_slope %d\n",
                slope, expected);
  csv += comment;
  write_output(cfg, csv);
  return 0;
}

inline int run_space_check(const RunConfig& cfg, std::ostream& log) {
  const SpaceParams params = SpaceParams::make(cfg.p1, cfg.p2, cfg.r);
  const Mesh mesh = single_cell_mesh(
      {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(1.0, 1.0), Vec2(0.0, 1.0)});

  log << "space " << params.str() << (params.enhanced ? " [enhanced]" : "") << " on the unit square\n";
  log << "trace degrees and moment counts per edge:\n";
  for (int j = 0; j <= params.p2 - 1; ++j) {
    char line[128];
    std::snprintf(line, sizeof(line), "  j=%d: trace degree alpha_j=%d, moments=%d\n", j,
                  trace_degree(j, params), edge_moment_count(j, params));
    log << line;
  }

  bool ok = true;
  const LocalDofLayout layout = enumerate_local(params, mesh, 0);
  const int formula = local_dim(params, layout.n_vertices);
  {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "dofs: %d vertex + %d edge + %d cell = %d, closed-form dimension %d -> %s\n",
                  layout.n_vertices * params.vertex_dofs(),
                  layout.n_vertices * edge_moment_total(params), cell_moment_count(params),
                  layout.size(), formula, layout.size() == formula ? "match" : "MISMATCH");
    log << line;
    ok = ok && layout.size() == formula;
  }

  const ElementOperators ops(mesh, 0, params);
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ops.d_matrix());
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    const bool full_rank = smin > 1e-8 * smax;
    char line[160];
    std::snprintf(line, sizeof(line),
                  "dof-of-monomial matrix: %ld x %ld, sigma_min/sigma_max = %.3e -> %s\n",
                  static_cast<long>(ops.d_matrix().rows()), static_cast<long>(ops.d_matrix().cols()),
                  smin / smax, full_rank ? "full column rank" : "RANK DEFICIENT");
    log << line;
    ok = ok && full_rank;
  }
  {
    const Eigen::MatrixXd residual =
        ops.pi_star() * ops.d_matrix() - Eigen::MatrixXd::Identity(ops.n_poly(), ops.n_poly());
    const double err = residual.cwiseAbs().maxCoeff();
    char line[128];
    std::snprintf(line, sizeof(line), "projector polynomial consistency residual: %.3e -> %s\n", err,
                  err < 1e-9 ? "ok" : "FAIL");
    log << line;
    ok = ok && err < 1e-9;
  }
  log << (ok ? "all checks pass\n" : "CHECKS FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace polyvem

#endif
