#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "swaa/error.hpp"
#include "swaa/grid.hpp"

using namespace swaa;

TEST(MonotoneCubic, ReproducesLinearData) {
  std::vector<double> v;
  for (int k = 0; k <= 10; ++k) v.push_back(2.0 - 0.5 * k * 0.1);
  const MonotoneCubic f(0.0, 0.1, v);
  for (double y : {0.0, 0.05, 0.37, 0.99, 1.0}) {
    EXPECT_NEAR(f(y), 2.0 - 0.5 * y, 1e-14);
    EXPECT_NEAR(f.derivative(y), -0.5, 1e-12);
  }
}

TEST(MonotoneCubic, KeepsMonotoneStepData) {
  const MonotoneCubic f(std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0}, std::vector<double>{0.0, 0.0, 1.0, 1.0, 1.0});
  double prev = f(0.0);
  for (int k = 1; k <= 400; ++k) {
    const double y = 0.01 * k;
    const double v = f(y);
    EXPECT_GE(v, prev - 1e-15);
    EXPECT_GE(v, -1e-15);
    EXPECT_LE(v, 1.0 + 1e-15);
    prev = v;
  }
}

TEST(MonotoneCubic, ClampsOutsideKnots) {
  const MonotoneCubic f(0.0, 1.0, {3.0, 1.0, 0.0});
  EXPECT_EQ(f(-1.0), 3.0);
  EXPECT_EQ(f(5.0), 0.0);
}

TEST(MonotoneCubic, RejectsBadKnots) {
  EXPECT_THROW(MonotoneCubic(0.0, -1.0, {1.0, 2.0}), Error);
  EXPECT_THROW(MonotoneCubic(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 2.0}), Error);
}

TEST(Grid, SNodesSnapLastToT) {
  const auto s = make_s_nodes(0.0094280904158206332, 0.002);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_EQ(s.front(), 0.0);
  EXPECT_EQ(s.back(), 0.0094280904158206332);
  for (std::size_t j = 1; j < s.size(); ++j) EXPECT_GT(s[j], s[j - 1]);
}

TEST(Grid, SNodesRejectStepLongerThanWindow) {
  EXPECT_THROW(make_s_nodes(0.01, 0.02), Error);
  EXPECT_THROW(make_s_nodes(0.01, 0.0), Error);
}

TEST(Grid, BufferCoversRightEntry) {
  std::size_t n_int = 0;
  double buffer = 0.0;
  const auto x = make_x_nodes(10.0, 0.01, 6.0, 0.05, &n_int, &buffer);
  EXPECT_EQ(n_int, 1000u);
  EXPECT_GE(buffer, 6.0 * 0.05 - 1e-12);
  EXPECT_NEAR(x.back(), 10.0 + buffer, 1e-9);
}

TEST(Grid, RejectsBadSpacing) {
  EXPECT_THROW(make_x_nodes(10.0, -0.1, 1.0, 1.0), Error);
  EXPECT_THROW(make_x_nodes(0.04, 0.1, 1.0, 1.0), Error);
}

TEST(Quadrature, TrapezoidIsSecondOrder) {
  auto err = [](std::size_t m) {
    std::vector<double> s(m + 1), f(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
      s[j] = static_cast<double>(j) / static_cast<double>(m);
      f[j] = std::exp(s[j]);
    }
    return std::abs(quad_trapezoid(f, s, 0, m) - (std::exp(1.0) - 1.0));
  };
  const double r = err(16) / err(32);
  EXPECT_NEAR(r, 4.0, 0.05);
}

TEST(Quadrature, PartialRange) {
  const std::vector<double> s{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> f{1.0, 1.0, 3.0, 3.0};
  EXPECT_DOUBLE_EQ(quad_trapezoid(f, s, 1, 3), 5.0);
  EXPECT_DOUBLE_EQ(quad_trapezoid(f, s, 2, 2), 0.0);
}
