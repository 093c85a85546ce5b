#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace swaa {

/// Shape-preserving piecewise-cubic Hermite interpolant (Fritsch-Butland
/// harmonic-mean slopes). Monotone data gives a monotone interpolant, and
/// affine data is reproduced exactly. Outside the knot range the end values
/// are continued as constants.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  /// Uniform knots x0, x0 + dx, ...
  MonotoneCubic(double x0, double dx, std::vector<double> values);

  /// Arbitrary strictly increasing knots.
  MonotoneCubic(std::vector<double> knots, std::vector<double> values);

  double operator()(double y) const;
  double derivative(double y) const;
  double second_derivative(double y) const;

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& slopes() const noexcept { return slopes_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double front_x() const noexcept { return x0_; }
  double back_x() const noexcept;

 private:
  struct Cell {
    std::size_t k;
    double h;
    double t;
  };

  Cell locate(double y) const;
  double knot(std::size_t k) const { return uniform_ ? x0_ + dx_ * static_cast<double>(k) : knots_[k]; }
  void compute_slopes();

  bool uniform_ = true;
  double x0_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Samples over a uniform x-grid, interpolated by MonotoneCubic.
using GridFunction = MonotoneCubic;

/// Discretization of one time window: uniform x-nodes 0..x_max plus a
/// right buffer, and s-nodes 0..T with the last node snapped to T.
struct WindowGrid {
  double dx = 0.0;
  std::size_t n_interior = 0;  ///< index of the node at x_max
  double buffer = 0.0;
  std::vector<double> x;
  double T = 0.0;
  std::vector<double> s;

  std::size_t nx() const noexcept { return x.size(); }
  /// Index of the last s-node (number of s-intervals).
  std::size_t last() const noexcept { return s.size() - 1; }
};

/// Uniform x-nodes on [0, x_max + buffer], buffer = ceil(c_max * t_total / dx) * dx.
std::vector<double> make_x_nodes(double x_max, double dx, double c_max, double t_total,
                                 std::size_t* n_interior = nullptr, double* buffer = nullptr);

/// s-nodes {0, dt, 2 dt, ..., T}; the final node is snapped to T.
std::vector<double> make_s_nodes(double T, double dt);

/// t_total defaults to T (single window).
WindowGrid build_grid(double x_max, double dx, double T, double dt, double c_max, double t_total = 0.0);

/// Same as build_grid but reuses an existing x-grid.
WindowGrid window_on(const WindowGrid& x_grid, double T, double dt);

/// Evaluates node samples over grid.x at an arbitrary y >= 0.
double interp_x(std::span<const double> values, const WindowGrid& grid, double y);

/// Composite trapezoid of the samples between s-nodes j_lo and j_hi.
double quad_trapezoid(std::span<const double> values, std::span<const double> s, std::size_t j_lo,
                      std::size_t j_hi);

}  // namespace swaa
