#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "support.hpp"
#include "swaa/error.hpp"
#include "swaa/picard.hpp"

using namespace swaa;

namespace {

WindowResult waterfall_window(Exec exec, double dx = 0.02) {
  const double T = oracle::kWaterfallT1;
  auto r = test::prepare(scenarios::waterfall(1.0, 1.0), 4.0, dx, T / 8.0, T);
  const WindowGrid g = test::window_grid(r, T);
  SolverOptions o;
  o.exec = exec;
  return solve_window(make_seed(r.setup), r.scenario.profile, g, o, {0, r.setup.C_phi, r.setup.C_h, 0.0});
}

}  // namespace

TEST(Trace, ConstantIntegrand) {
  WindowGrid g;
  g.dx = 0.5;
  g.x = {0.0, 0.5, 1.0};
  g.n_interior = 2;
  g.s = {0.0, 0.1, 0.2};
  g.T = 0.2;
  CharacteristicField f(2, 3);
  f.Z_plus = ColumnArray(3, 3, -1.0);
  f.Y_plus = ColumnArray(3, 3, -2.0);
  f.Z_minus = ColumnArray(3, 3, -3.0);
  f.Y_minus = ColumnArray(3, 3, 0.0);
  trace_coordinates(f, g, Exec::serial);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(f.eta_plus(2, i), g.x[i]);
    EXPECT_NEAR(f.eta_plus(0, i), g.x[i] + 0.25 * 5.0 * 0.2, 1e-15);
    EXPECT_NEAR(f.eta_minus(1, i), g.x[i] + 0.25 * 9.0 * 0.1, 1e-15);
  }
}

TEST(Picard, SteadyStateIsFixed) {
  auto r = test::prepare(scenarios::steady(), 2.0, 0.05, 0.01, 0.05);
  const double T = window_length(0, r.setup.C_phi, r.setup.C_h);
  const WindowGrid g = window_on(r.x_grid, T, T / 8.0);
  const auto w = solve_window(make_seed(r.setup), r.scenario.profile, g, {}, {0, r.setup.C_phi, r.setup.C_h, 0.0});
  ASSERT_EQ(w.history.size(), g.s.size());
  for (std::size_t k = 0; k < w.history.size(); ++k) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      EXPECT_NEAR(w.history.z_plus[k].values()[i], 0.0, 1e-13);
      EXPECT_NEAR(w.history.z_minus[k].values()[i], -4.0 * std::sqrt(2.0), 1e-13);
    }
  }
}

TEST(Picard, WaterfallContraction) {
  const auto w = waterfall_window(Exec::parallel);
  const double floor = 1e3 * 2.220446049250313e-16;
  std::size_t ratios = 0;
  for (const auto& tr : w.traces) {
    for (const auto& inner : tr.inner) {
      for (std::size_t k = 1; k < inner.size(); ++k) {
        if (inner[k - 1].weighted <= floor || inner[k].weighted <= floor) continue;
        EXPECT_LE(inner[k].weighted / inner[k - 1].weighted, 0.55);
        ++ratios;
      }
    }
    for (std::size_t k = 1; k < tr.outer_z_distance.size(); ++k) {
      if (tr.outer_z_distance[k - 1] <= floor || tr.outer_z_distance[k] <= floor) continue;
      EXPECT_LE(tr.outer_z_distance[k] / tr.outer_z_distance[k - 1], 1.0 / 35.0 + 0.05);
    }
  }
  EXPECT_GT(ratios, 0u);
}

TEST(Picard, SerialAndParallelAgreeBitwise) {
  const auto a = waterfall_window(Exec::serial);
  const auto b = waterfall_window(Exec::parallel);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k) {
    EXPECT_EQ(a.history.z_plus[k].values(), b.history.z_plus[k].values());
    EXPECT_EQ(a.history.z_minus[k].values(), b.history.z_minus[k].values());
  }
  const auto ra = a.last_field.eta_minus.raw();
  const auto rb = b.last_field.eta_minus.raw();
  EXPECT_TRUE(std::equal(ra.begin(), ra.end(), rb.begin(), rb.end()));
}

TEST(Picard, SignsHoldOnWaterfall) {
  const auto w = waterfall_window(Exec::parallel);
  const auto& f = w.last_field;
  for (std::size_t i = 0; i < f.Z_plus.nx(); ++i) {
    for (std::size_t j = 0; j <= f.n; ++j) {
      EXPECT_LE(f.Z_plus(j, i), 1e-9);
      EXPECT_LE(f.Z_minus(j, i), 1e-9);
      EXPECT_LE(f.Y_plus(j, i), 1e-9);
      EXPECT_LE(f.Y_minus(j, i), 1e-9);
    }
  }
}

TEST(Picard, RefusesOverlongWindow) {
  auto r = test::prepare(scenarios::waterfall(1.0, 1.0), 2.0, 0.05, 0.002, 0.05);
  const WindowGrid g = window_on(r.x_grid, 0.02, 0.0025);
  try {
    solve_window(make_seed(r.setup), r.scenario.profile, g, {}, {0, r.setup.C_phi, r.setup.C_h, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(Picard, IterationCapRaisesConvergence) {
  auto r = test::prepare(scenarios::waterfall(1.0, 1.0), 2.0, 0.05, 0.001, 0.01);
  const WindowGrid g = window_on(r.x_grid, oracle::kWaterfallT1, oracle::kWaterfallT1 / 4.0);
  SolverOptions o;
  o.max_inner = 1;
  o.tol_inner = 1e-15;
  try {
    solve_window(make_seed(r.setup), r.scenario.profile, g, o, {0, r.setup.C_phi, r.setup.C_h, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::convergence);
  }
}

TEST(Picard, ZeroDataOnFlatBottom) {
  const std::vector<double> zero(41, 0.0);
  const auto seed = make_seed(0.0, 0.05, zero, zero, zero, zero);
  WindowGrid g;
  g.dx = 0.05;
  g.n_interior = 40;
  for (int i = 0; i <= 40; ++i) g.x.push_back(0.05 * i);
  g.T = 0.1;
  g.s = make_s_nodes(0.1, 0.025);
  const auto w = solve_window(seed, BathymetryProfile::constant(1.0), g, {}, {0, 0.0, 1.0, 0.0});
  for (std::size_t k = 0; k < w.history.size(); ++k) EXPECT_EQ(test::sup_abs(w.history.z_minus[k].values()), 0.0);
}
