// Command-line driver: solve | convergence | space-check.

#include <CLI11.hpp>
#include <iostream>

#include "polyvem/runner.hpp"

namespace {

void add_common_options(CLI::App* cmd, polyvem::RunConfig& cfg) {
  cmd->add_option("--p1", cfg.p1, "operator order (>= 1)");
  cmd->add_option("--p2", cfg.p2, "regularity index (>= p1)");
  cmd->add_option("-r,--r", cfg.r, "polynomial accuracy order (>= p2)");
  cmd->add_option("--mesh", cfg.mesh, "mesh: file path or square:L | perturbed:L | hex:L");
  cmd->add_option("--solution", cfg.solution, "manufactured solution: sin | bubble | poly-patch");
  cmd->add_option("--out", cfg.out, "CSV output path");
  cmd->add_option("--seed", cfg.seed, "seed for randomized mesh families");
}

int parse_levels(const std::string& text, polyvem::RunConfig& cfg) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) return 1;
  try {
    cfg.level_lo = std::stoi(text.substr(0, pos));
    cfg.level_hi = std::stoi(text.substr(pos + 2));
  } catch (const std::exception&) {
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conforming virtual element solver for (-Delta)^p1 u = f on polygonal meshes"};
  app.require_subcommand(1);

  polyvem::RunConfig cfg;
  std::string levels;

  CLI::App* solve = app.add_subcommand("solve", "one discrete solve against a manufactured solution");
  add_common_options(solve, cfg);

  CLI::App* conv = app.add_subcommand("convergence", "mesh-refinement study with measured rates");
  add_common_options(conv, cfg);
  conv->add_option("--levels", levels, "refinement level range A..B");

  CLI::App* check = app.add_subcommand("space-check", "degree-of-freedom and projector diagnostics");
  add_common_options(check, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return polyvem::run_solve(cfg, std::cout);
    if (conv->parsed()) {
      if (!levels.empty() && parse_levels(levels, cfg) != 0) {
        std::cerr << "error: --levels expects A..B\n";
        return 2;
      }
      return polyvem::run_convergence(cfg, std::cout);
    }
    return polyvem::run_space_check(cfg, std::cout);
  } catch (const polyvem::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const polyvem::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
}
