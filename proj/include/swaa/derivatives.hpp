#pragma once

#include <cstddef>
#include <functional>

#include "swaa/grid.hpp"
#include "swaa/model.hpp"
#include "swaa/picard.hpp"

namespace swaa {

/// U+- = dZ+-/dx, V+- = dY+-/dx and the Jacobians xi+- = d eta+-/dx for one target node.
struct DerivativeField {
  DerivativeField() = default;
  DerivativeField(std::size_t n, std::size_t nx);

  std::size_t n = 0;
  ColumnArray U_plus, U_minus, V_plus, V_minus, xi_plus, xi_minus;
  int iterations = 0;     ///< outer U sweeps used by solve_uv (max over columns)
  double ball_norm = 0.0;  ///< sup|U+| + sup|U-| of the accepted field
};

/// V+- = A+- xi+-(U, V), iterated to a fixed point for the given U.
/// A+-(s_j) is u-+(s_j, .) at eta+-(s_j) for j < n and U-+(t_n) at the top node.
/// Returns a field holding the given U, the solved V and the matching xi.
DerivativeField v_from_u(const ColumnArray& U_plus, const ColumnArray& U_minus, const CharacteristicField& field,
                         const DiagonalHistory& history, const WindowGrid& grid, const SolverOptions& options);

/// Fixed point of U+- = phi+-'(eta+-(0)) xi+-(0) + int_0^s h''(eta+-) xi+-,
/// alternated with v_from_u. Iterates are kept inside sup|U+| + sup|U-| <= ball_radius.
/// `history` must hold u+- for s-nodes 0..n-1.
DerivativeField solve_uv(const CharacteristicField& field, const DiagonalHistory& history,
                         const BathymetryProfile& profile, const WindowGrid& grid, const SolverOptions& options,
                         double ball_radius);

/// xi+-(s_j) = 1 - (1/4) int_{s_j}^{t_n} (3 U+- + V+-). Raises jacobian_collapse if any xi <= 0.
void compute_xi(DerivativeField& d, const WindowGrid& grid, Exec exec = Exec::parallel);

/// exp(-(1/4) int_{s_j}^{t_n} (3 u+- + u-+)(nu, eta+-(nu)) dnu) with u taken from
/// the diagonal derivative history; `history` must hold u+- for s-nodes 0..n.
struct XiPair {
  ColumnArray plus;
  ColumnArray minus;
};
XiPair xi_exponential_form(const CharacteristicField& field, const DiagonalHistory& history, const WindowGrid& grid,
                           Exec exec = Exec::parallel);

using DerivativeObserver =
    std::function<void(std::size_t n, const FixedTimeResult& result, const DerivativeField& derivatives)>;

/// NodeHook that solves U, V, xi after each node and appends u+-(t_n, .) and
/// xi+-(window start; t_n, .) to the history.
NodeHook derivative_hook(const BathymetryProfile& profile, const WindowGrid& grid, const SolverOptions& options,
                         double ball_radius, DerivativeObserver observer = {});

/// solve_window with derivatives; the seed must carry u+-.
WindowResult solve_window_uv(DiagonalHistory seed, const BathymetryProfile& profile, const WindowGrid& grid,
                             const SolverOptions& options, const WindowBudget& budget,
                             DerivativeObserver observer = {});

}  // namespace swaa
