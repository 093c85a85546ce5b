#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "swaa/model.hpp"
#include "swaa/picard.hpp"

namespace swaa {

/// z-(t, x) for h' = 0, z+ = 0: solves x0 + (3/4) phi(x0) t = x on the bracket
/// [x, x + 2 phi_sup t] and returns phi(x0). phi_sup bounds |phi| on the bracket.
/// Raises no_root when the characteristic map is not increasing over the bracket.
double burgers_exact(const std::function<double(double)>& phi_minus, double t, double x, double phi_sup);

/// -4 / (3 min phi-') when min phi-' < 0, otherwise +infinity.
double breaking_time(std::span<const double> dphi_minus);

struct UpwindOptions {
  double cfl = 0.9;  ///< largest admissible max|c| dt / dx
  double dt = 0.0;   ///< 0: pick 0.5 dx / max|c| from the initial state
  std::vector<double> snapshot_times;  ///< extra output times; t_final is always included
  Exec exec = Exec::parallel;
};

struct UpwindResult {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<std::vector<double>> z_plus, z_minus;
  double dt = 0.0;
  std::size_t steps = 0;
};

/// Forward Euler in time, one-sided differences from the right in x, for
/// d_t z+- + c+- d_x z+- = h'. Needs c+- < 0 throughout. Past the last node
/// the state is continued as a constant.
UpwindResult upwind_reference(const ProblemSetup& setup, const BathymetryProfile& profile, double t_final,
                              const UpwindOptions& options = {});

enum class Family { plus, minus };

struct RiccatiTrace {
  std::vector<double> t;
  std::vector<double> eta;  ///< characteristic position
  std::vector<double> u;    ///< d_x z along the characteristic
};

/// Integrates d eta/ds = c(s, eta) and du/ds = h''(eta) - (3/4) u^2 - (1/4) u u_other
/// with classical RK4 from (0, x_start). z and u_other come from the history:
/// linear in time between slices, monotone cubic in x. Raises blow_up when |u| > 1e6.
RiccatiTrace riccati_derivative(const DiagonalHistory& history, const BathymetryProfile& profile, Family family,
                                double x_start, double t_final, double step);

}  // namespace swaa
