#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "swaa/error.hpp"
#include "swaa/invariants.hpp"
#include "swaa/oracle.hpp"

using namespace swaa;

namespace {

WindowGrid small_grid() {
  WindowGrid g;
  g.dx = 0.5;
  g.x = {0.0, 0.5, 1.0};
  g.n_interior = 2;
  g.s = {0.0, 0.1, 0.2};
  g.T = 0.2;
  return g;
}

CharacteristicField clean_field() {
  CharacteristicField f(2, 3);
  f.Z_plus = ColumnArray(3, 3, -0.1);
  f.Z_minus = ColumnArray(3, 3, -4.0);
  f.Y_plus = ColumnArray(3, 3, -4.0);
  f.Y_minus = ColumnArray(3, 3, -0.1);
  f.eta_plus = ColumnArray(3, 3, 2.0);
  f.eta_minus = ColumnArray(3, 3, 2.0);
  return f;
}

// z-(t, x) = exact Burgers solution for the linear data, z+ = 0.
DiagonalHistory burgers_history(double dx, double dt, std::size_t steps, double x_max) {
  const auto sc = scenarios::burgers_linear();
  DiagonalHistory h;
  const auto nx = static_cast<std::size_t>(std::llround(x_max / dx)) + 1;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = dt * static_cast<double>(k);
    std::vector<double> zp(nx, 0.0), zm(nx);
    for (std::size_t i = 0; i < nx; ++i) zm[i] = burgers_exact(sc.data.phi_minus, t, dx * i, 2.0);
    h.push_solution(t, dx, zp, zm);
  }
  return h;
}

}  // namespace

TEST(Closure, CleanFieldPasses) {
  const auto f = clean_field();
  const auto r = closure_report(f, nullptr, small_grid());
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.constraints.size(), 6u);
  EXPECT_EQ(r.nodes_audited, 9u);
}

TEST(Closure, LocatesFirstAndWorstViolation) {
  auto f = clean_field();
  f.Z_minus(1, 1) = 0.5;
  f.Z_minus(0, 2) = 2.0;
  const auto r = closure_report(f, nullptr, small_grid(), 1e-9, true, 1.0);
  EXPECT_FALSE(r.pass);
  const auto* c = r.find("Z_minus<=0");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->violations, 2u);
  EXPECT_EQ(c->first_at.i, 1u);
  EXPECT_EQ(c->first_at.j, 1u);
  EXPECT_DOUBLE_EQ(c->worst, 2.0);
  EXPECT_EQ(c->worst_at.i, 2u);
  EXPECT_DOUBLE_EQ(c->worst_at.s, 1.0);
  EXPECT_DOUBLE_EQ(c->worst_at.t, 1.2);
  EXPECT_TRUE(r.find("Z_plus<=0")->pass);
}

TEST(Closure, DerivativeSignsOnlyCountWhenGlobal) {
  const auto f = clean_field();
  DerivativeField d(2, 3);
  d.U_minus(0, 0) = -1.0;
  EXPECT_FALSE(closure_report(f, &d, small_grid(), 1e-9, true).pass);
  const auto local = closure_report(f, &d, small_grid(), 1e-9, false);
  EXPECT_TRUE(local.pass);
  EXPECT_FALSE(local.find("U_minus>=0")->pass);
  EXPECT_FALSE(local.find("U_minus>=0")->applicable);
}

TEST(Closure, XiOutsideUnitIntervalFails) {
  const auto f = clean_field();
  DerivativeField d(2, 3);
  d.xi_plus(0, 1) = 0.0;
  EXPECT_FALSE(closure_report(f, &d, small_grid()).find("xi_plus_in_(0,1]")->pass);
  DerivativeField e(2, 3);
  e.xi_minus(0, 1) = 1.0 + 1e-6;
  EXPECT_FALSE(closure_report(f, &e, small_grid()).find("xi_minus_in_(0,1]")->pass);
}

TEST(Closure, MergeKeepsWorst) {
  auto f = clean_field();
  auto a = closure_report(f, nullptr, small_grid());
  f.Y_plus(2, 0) = 0.25;
  const auto b = closure_report(f, nullptr, small_grid());
  a.merge(b);
  EXPECT_FALSE(a.pass);
  EXPECT_EQ(a.nodes_audited, 18u);
  EXPECT_DOUBLE_EQ(a.find("Y_plus<=0")->worst, 0.25);
}

TEST(Residual, ExactSolutionIsSmall) {
  const auto h = burgers_history(0.01, 0.01, 5, 5.0);
  std::vector<double> x;
  for (std::size_t i = 0; i < h.z_minus[0].size(); ++i) x.push_back(0.01 * i);
  const auto r = residual_report(h, BathymetryProfile::constant(1.0), x);
  EXPECT_LT(r.sup(), 1e-6);
  EXPECT_EQ(r.time_nodes, 4u);
}

TEST(Residual, PerturbationIsSeen) {
  auto h = burgers_history(0.01, 0.01, 5, 5.0);
  std::vector<double> zm = h.z_minus[2].values();
  zm[100] += 1e-3;
  h.z_minus[2] = GridFunction(0.0, 0.01, zm);
  std::vector<double> x;
  for (std::size_t i = 0; i < zm.size(); ++i) x.push_back(0.01 * i);
  const auto r = residual_report(h, BathymetryProfile::constant(1.0), x);
  EXPECT_GT(r.sup(), 0.05);
  EXPECT_DOUBLE_EQ(r.components[1].t, 0.02);
}

TEST(Monitor, GradientCrossing) {
  BreakingMonitor m(10.0);
  const std::vector<double> x{0.0, 1.0};
  m.start(0.0, std::vector<double>{0.0, 0.0}, std::vector<double>{0.5, 1.0});
  EXPECT_FALSE(m.observe(0.1, std::vector<double>{0.0, 0.0}, std::vector<double>{5.0, 2.0}, x));
  EXPECT_TRUE(m.observe(0.2, std::vector<double>{0.0, 0.0}, std::vector<double>{2.0, 11.0}, x));
  EXPECT_FALSE(m.observe(0.3, std::vector<double>{0.0, 0.0}, std::vector<double>{2.0, 50.0}, x));
  const auto& v = m.verdict();
  EXPECT_TRUE(v.broken);
  EXPECT_EQ(v.cause, "gradient");
  EXPECT_DOUBLE_EQ(v.t_star, 0.2);
  EXPECT_DOUBLE_EQ(v.x_star, 1.0);
  EXPECT_EQ(m.times().size(), 4u);
}

TEST(Monitor, EarlierCollapseWins) {
  BreakingMonitor m(10.0);
  m.start(0.0, std::vector<double>{1.0}, std::vector<double>{1.0});
  m.collapse(0.15, 0.3, "xi <= 0");
  m.observe(0.2, std::vector<double>{20.0}, std::vector<double>{0.0}, std::vector<double>{0.0});
  EXPECT_EQ(m.verdict().cause, "jacobian-collapse");
  EXPECT_DOUBLE_EQ(m.verdict().t_star, 0.15);
  EXPECT_DOUBLE_EQ(m.verdict().t_gradient, 0.2);
}

TEST(Monitor, ZeroInitialGradientUsesFloor) {
  BreakingMonitor m(100.0, 1e-8);
  m.start(0.0, std::vector<double>{0.0}, std::vector<double>{0.0});
  EXPECT_DOUBLE_EQ(m.verdict().threshold, 1e-6);
  EXPECT_FALSE(m.observe(1.0, std::vector<double>{0.0}, std::vector<double>{0.0}, std::vector<double>{0.0}));
  EXPECT_FALSE(m.verdict().broken);
}

TEST(Monitor, ObserveBeforeStartRaises) {
  BreakingMonitor m;
  EXPECT_THROW(m.observe(0.0, std::vector<double>{0.0}, std::vector<double>{0.0}, std::vector<double>{0.0}), Error);
}

TEST(Json, NonFiniteBecomesNull) {
  BreakingVerdict v;
  const auto j = to_json(v);
  EXPECT_TRUE(j["t_star"].is_null());
  EXPECT_FALSE(j["broken"].get<bool>());
}
