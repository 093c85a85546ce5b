#pragma once

#include <cstddef>
#include <limits>
#include <string>

#include "swaa/continuation.hpp"
#include "swaa/model.hpp"
#include "swaa/picard.hpp"

namespace swaa::cli {

/// Validated run configuration. Sections and keys:
///   [bathymetry] kind (power-law|constant|tabulated), p, depth, x_extent, table_path
///   [initial]    preset, center | u0, eta0 (expressions in x, h) | phi_path
///   [domain]     x_max
///   [grid]       dx, dt, min_s_nodes
///   [solver]     tol_inner, tol_outer, max_inner, max_outer, sign_tol, schedule,
///                max_windows, norm_safety, exec (serial|parallel)
///   [run]        t_final, snapshot_stride, breaking_threshold, oracle_dx
///   [output]     dir
struct RunConfig {
  std::string source;

  bool has_bathymetry = false;
  std::string bathymetry_kind = "constant";
  double p = 1.0;
  double depth = 1.0;
  double x_extent = std::numeric_limits<double>::infinity();
  std::string table_path;

  std::string preset;
  double center = 5.0;
  std::string u0_expr, eta0_expr;
  std::string phi_path;

  GridParams grid;
  SolverOptions solver;
  Schedule schedule = Schedule::harmonic;
  std::size_t max_windows = 100000;
  double norm_safety = 1.0;

  double t_final = 0.0;
  std::size_t snapshot_stride = 0;
  double breaking_threshold = 100.0;
  double oracle_dx = 0.0;  ///< 0: grid.dx / 10

  std::string output_dir = "out";
};

/// Reads key = value sections. Unknown sections or keys, missing required
/// keys (domain.x_max, grid.dx, grid.dt, run.t_final) and nonpositive
/// spacings raise config errors.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

/// Profile and initial data described by a configuration. Relative table
/// paths resolve against the directory of the config file.
struct Problem {
  BathymetryProfile profile;
  InitialData data;
  bool burgers_reduction = false;
};
Problem build_problem(const RunConfig& config);

}  // namespace swaa::cli
