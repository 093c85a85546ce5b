#include "swaa/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swaa/error.hpp"

namespace swaa {

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// One-sided three-point end slope with the usual shape-preserving limits.
double edge_slope(double h0, double h1, double d0, double d1) {
  double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (sign(m) != sign(d0)) {
    m = 0.0;
  } else if (sign(d0) != sign(d1) && std::abs(m) > 3.0 * std::abs(d0)) {
    m = 3.0 * d0;
  }
  return m;
}

}  // namespace

MonotoneCubic::MonotoneCubic(double x0, double dx, std::vector<double> values)
    : uniform_(true), x0_(x0), dx_(dx), values_(std::move(values)) {
  if (!(dx > 0.0)) throw Error(ErrorKind::config, "interpolant spacing must be positive");
  compute_slopes();
}

MonotoneCubic::MonotoneCubic(std::vector<double> knots, std::vector<double> values)
    : uniform_(false), knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() != values_.size() || knots_.empty())
    throw Error(ErrorKind::config, "interpolant needs matching, non-empty knot and value tables");
  for (std::size_t k = 1; k < knots_.size(); ++k)
    if (!(knots_[k] > knots_[k - 1])) throw Error(ErrorKind::config, "interpolant knots must increase strictly");
  x0_ = knots_.front();
  compute_slopes();
}

double MonotoneCubic::back_x() const noexcept {
  return values_.empty() ? x0_ : knot(values_.size() - 1);
}

void MonotoneCubic::compute_slopes() {
  const std::size_t n = values_.size();
  slopes_.assign(n, 0.0);
  if (n < 2) return;
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = knot(k + 1) - knot(k);
    d[k] = (values_[k + 1] - values_[k]) / h[k];
  }
  if (n == 2) {
    slopes_[0] = slopes_[1] = d[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] <= 0.0) {
      slopes_[k] = 0.0;
    } else if (d[k - 1] == d[k]) {
      slopes_[k] = d[k];
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      slopes_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
  }
  slopes_[0] = edge_slope(h[0], h[1], d[0], d[1]);
  slopes_[n - 1] = edge_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

MonotoneCubic::Cell MonotoneCubic::locate(double y) const {
  const std::size_t n = values_.size();
  std::size_t k = 0;
  if (uniform_) {
    const double r = (y - x0_) / dx_;
    k = static_cast<std::size_t>(r);
    if (k > n - 2) k = n - 2;
  } else {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
    k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - knots_.begin()) - 1));
    if (k > n - 2) k = n - 2;
  }
  const double xk = knot(k);
  const double h = knot(k + 1) - xk;
  return {k, h, (y - xk) / h};
}

double MonotoneCubic::operator()(double y) const {
  const std::size_t n = values_.size();
  if (n == 0) return 0.0;
  if (n == 1 || y <= x0_) return values_.front();
  if (y >= back_x()) return values_.back();
  const auto [k, h, t] = locate(y);
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[k] + h10 * h * slopes_[k] + h01 * values_[k + 1] + h11 * h * slopes_[k + 1];
}

double MonotoneCubic::derivative(double y) const {
  const std::size_t n = values_.size();
  if (n < 2 || y < x0_ || y > back_x()) return 0.0;
  const auto [k, h, t] = locate(y);
  const double t2 = t * t;
  const double d00 = (6.0 * t2 - 6.0 * t) / h;
  const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double d01 = (-6.0 * t2 + 6.0 * t) / h;
  const double d11 = 3.0 * t2 - 2.0 * t;
  return d00 * values_[k] + d10 * slopes_[k] + d01 * values_[k + 1] + d11 * slopes_[k + 1];
}

double MonotoneCubic::second_derivative(double y) const {
  const std::size_t n = values_.size();
  if (n < 2 || y < x0_ || y > back_x()) return 0.0;
  const auto [k, h, t] = locate(y);
  const double s00 = (12.0 * t - 6.0) / (h * h);
  const double s10 = (6.0 * t - 4.0) / h;
  const double s01 = (-12.0 * t + 6.0) / (h * h);
  const double s11 = (6.0 * t - 2.0) / h;
  return s00 * values_[k] + s10 * slopes_[k] + s01 * values_[k + 1] + s11 * slopes_[k + 1];
}

std::vector<double> make_x_nodes(double x_max, double dx, double c_max, double t_total,
                                 std::size_t* n_interior, double* buffer) {
  if (!(dx > 0.0)) throw Error(ErrorKind::config, "grid.dx must be positive");
  if (!(x_max > 0.0)) throw Error(ErrorKind::config, "domain.x_max must be positive");
  if (c_max < 0.0 || t_total < 0.0) throw Error(ErrorKind::config, "speed bound and horizon must be nonnegative");
  const auto interior = static_cast<std::size_t>(std::llround(x_max / dx));
  if (interior == 0) throw Error(ErrorKind::config, "grid.dx exceeds domain.x_max");
  const auto extra = static_cast<std::size_t>(std::ceil(c_max * t_total / dx - 1e-9));
  std::vector<double> x(interior + extra + 1);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = dx * static_cast<double>(i);
  if (n_interior) *n_interior = interior;
  if (buffer) *buffer = dx * static_cast<double>(extra);
  return x;
}

std::vector<double> make_s_nodes(double T, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::config, "grid.dt must be positive");
  if (!(T > 0.0)) throw Error(ErrorKind::config, "window length must be positive");
  if (dt > T * (1.0 + 1e-12)) throw Error(ErrorKind::config, "grid.dt exceeds the window length");
  const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(T / dt - 1e-9)));
  std::vector<double> s(m + 1);
  for (std::size_t j = 0; j < m; ++j) s[j] = dt * static_cast<double>(j);
  s[m] = T;
  return s;
}

WindowGrid build_grid(double x_max, double dx, double T, double dt, double c_max, double t_total) {
  WindowGrid g;
  g.dx = dx;
  g.s = make_s_nodes(T, dt);
  g.T = T;
  g.x = make_x_nodes(x_max, dx, c_max, t_total > 0.0 ? t_total : T, &g.n_interior, &g.buffer);
  return g;
}

WindowGrid window_on(const WindowGrid& x_grid, double T, double dt) {
  WindowGrid g;
  g.dx = x_grid.dx;
  g.n_interior = x_grid.n_interior;
  g.buffer = x_grid.buffer;
  g.x = x_grid.x;
  g.T = T;
  g.s = make_s_nodes(T, dt);
  return g;
}

double interp_x(std::span<const double> values, const WindowGrid& grid, double y) {
  const MonotoneCubic f(0.0, grid.dx, std::vector<double>(values.begin(), values.end()));
  return f(y);
}

double quad_trapezoid(std::span<const double> values, std::span<const double> s, std::size_t j_lo,
                      std::size_t j_hi) {
  double acc = 0.0;
  for (std::size_t j = j_lo; j < j_hi; ++j) acc += 0.5 * (s[j + 1] - s[j]) * (values[j] + values[j + 1]);
  return acc;
}

}  // namespace swaa
