#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "swaa/continuation.hpp"
#include "swaa/scenarios.hpp"

namespace test {

struct Run {
  swaa::Scenario scenario;
  swaa::GridParams params;
  swaa::WindowGrid x_grid;
  swaa::ProblemSetup setup;
};

inline Run prepare(swaa::Scenario sc, double x_max, double dx, double dt, double t_final) {
  Run r{std::move(sc), {x_max, dx, dt, 8}, {}, {}};
  r.setup = swaa::prepare_setup(r.scenario.data, r.scenario.profile, r.params, t_final, r.x_grid);
  return r;
}

/// Grid for one waterfall window of length T = 1 / (75 sqrt 2).
inline swaa::WindowGrid window_grid(const Run& r, double T) { return swaa::window_on(r.x_grid, T, r.params.dt); }

inline double sup_abs(std::span<const double> v, std::size_t n = 0) {
  double s = 0.0;
  const std::size_t end = n == 0 ? v.size() : std::min(n, v.size());
  for (std::size_t i = 0; i < end; ++i) s = std::max(s, std::abs(v[i]));
  return s;
}

}  // namespace test
