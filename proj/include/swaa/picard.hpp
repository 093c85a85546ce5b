#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "swaa/grid.hpp"
#include "swaa/model.hpp"

namespace swaa {

/// Kernel execution: a plain loop over x-columns, or the same column kernel
/// distributed with OpenMP. Both produce bit-identical results.
enum class Exec { serial, parallel };

/// Samples over (s_j, x_i), j = 0..n, stored one x-column at a time.
class ColumnArray {
 public:
  ColumnArray() = default;
  ColumnArray(std::size_t ns, std::size_t nx, double fill = 0.0) : ns_(ns), nx_(nx), data_(ns * nx, fill) {}

  double& operator()(std::size_t j, std::size_t i) { return data_[i * ns_ + j]; }
  double operator()(std::size_t j, std::size_t i) const { return data_[i * ns_ + j]; }

  std::span<double> column(std::size_t i) { return {data_.data() + i * ns_, ns_}; }
  std::span<const double> column(std::size_t i) const { return {data_.data() + i * ns_, ns_}; }

  std::size_t ns() const noexcept { return ns_; }
  std::size_t nx() const noexcept { return nx_; }
  std::span<const double> raw() const noexcept { return data_; }

  /// Values at a fixed s-node across all columns.
  std::vector<double> row(std::size_t j) const;

 private:
  std::size_t ns_ = 0;
  std::size_t nx_ = 0;
  std::vector<double> data_;
};

/// Z+-(s; t_n, x), Y+-(s; t_n, x) and the traced feet eta+-(s; t_n, x) for one target node.
struct CharacteristicField {
  CharacteristicField() = default;
  CharacteristicField(std::size_t n, std::size_t nx);

  std::size_t n = 0;
  ColumnArray Z_plus, Z_minus, Y_plus, Y_minus, eta_plus, eta_minus;
};

/// Resolved physical solution z+-(t, .) = Z+-(t; t, .), optionally with
/// x-derivatives u+- and the Jacobians xi+-(window start; t, .).
struct DiagonalHistory {
  std::vector<double> t;
  std::vector<GridFunction> z_plus, z_minus;
  std::vector<GridFunction> u_plus, u_minus;
  std::vector<std::vector<double>> xi_plus, xi_minus;

  std::size_t size() const noexcept { return t.size(); }
  bool has_derivatives() const noexcept { return u_plus.size() == t.size() && !t.empty(); }

  void push_solution(double time, double dx, std::vector<double> zp, std::vector<double> zm);
  void push_derivatives(double dx, std::vector<double> up, std::vector<double> um, std::vector<double> xip,
                        std::vector<double> xim);
};

/// Window seed: z+-(t0, .) and u+-(t0, .) = d/dx z+-(t0, .) on the x-grid.
DiagonalHistory make_seed(double t0, double dx, std::vector<double> z_plus, std::vector<double> z_minus,
                          std::vector<double> u_plus, std::vector<double> u_minus);
DiagonalHistory make_seed(const ProblemSetup& setup);

struct SolverOptions {
  double tol_inner = 1e-10;
  double tol_outer = 1e-9;
  int max_inner = 60;
  int max_outer = 40;
  double sign_tol = 1e-9;
  /// Abort on a broken sign closure (eta >= x, Z <= 0, Y <= 0).
  bool enforce_signs = true;
  /// Refuse windows longer than the admissible window length.
  bool check_window = true;
  Exec exec = Exec::parallel;
};

/// Distances between successive inner iterates, maximized over both families.
struct InnerStep {
  double dz = 0.0;        ///< sup |Z^(k+1) - Z^(k)|
  double dy = 0.0;        ///< sup |Y^(k+1) - Y^(k)|
  double weighted = 0.0;  ///< max over +- of 3 sup|dZ| + sup|dY|
};

struct ConvergenceTrace {
  std::vector<std::vector<InnerStep>> inner;  ///< one list per outer iteration
  std::vector<double> outer_z_distance;       ///< sup|dZ+| + sup|dZ-| between outer iterates
  std::vector<double> outer_diag_change;      ///< sup change of z+-(t_n, .)
};

/// What the inner sweep reads: resolved diagonals for s_j < t_n and the
/// frozen outer iterate for s = t_n.
struct DiagonalView {
  const DiagonalHistory& history;
  std::span<const double> top_plus;
  std::span<const double> top_minus;
};

/// eta+-(s_j; t_n, x_i) = x_i - (1/4) int_{s_j}^{t_n} (3 Z+- + Y+-), trapezoid rule.
void trace_coordinates(CharacteristicField& field, const WindowGrid& grid, Exec exec = Exec::parallel);

/// One explicit sweep of the inner iteration: `out` receives Z, Y of the next
/// iterate and the feet traced from `in`.
InnerStep inner_sweep(const CharacteristicField& in, CharacteristicField& out, const DiagonalView& diagonal,
                      const BathymetryProfile& profile, const WindowGrid& grid, Exec exec = Exec::parallel);

struct FixedTimeResult {
  CharacteristicField field;
  std::vector<double> z_plus, z_minus;  ///< Z+-(t_n; t_n, .)
  ConvergenceTrace trace;
};

/// Two-level iteration for target node n >= 1. `history` holds the resolved
/// diagonals for s-nodes 0..n-1 of this window.
FixedTimeResult solve_fixed_time(std::size_t n, const DiagonalHistory& history, const BathymetryProfile& profile,
                                 const WindowGrid& grid, const SolverOptions& options);

/// Constants that bound the window.
struct WindowBudget {
  std::size_t m = 0;  ///< schedule index; window_length(m, C_phi, C_h) caps grid.T
  double C_phi = 0.0;
  double C_h = 0.0;
  double ball_radius = 0.0;  ///< derivative ball sup|U+| + sup|U-| <= radius
};

/// Called after node n is resolved; may append derivative data to history.
using NodeHook = std::function<void(std::size_t n, const FixedTimeResult& result, DiagonalHistory& history)>;

struct WindowResult {
  DiagonalHistory history;  ///< s-nodes 0..M of the window (entry 0 is the seed)
  std::vector<ConvergenceTrace> traces;
  CharacteristicField last_field;
};

/// Marches solve_fixed_time over n = 1..M.
WindowResult solve_window(DiagonalHistory seed, const BathymetryProfile& profile, const WindowGrid& grid,
                          const SolverOptions& options, const WindowBudget& budget, const NodeHook& hook = {});

}  // namespace swaa
