#include "swaa/derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "columns.hpp"
#include "swaa/error.hpp"

namespace swaa {

using detail::for_columns;
using detail::node_prefix;
using detail::sup_abs;

DerivativeField::DerivativeField(std::size_t n_, std::size_t nx)
    : n(n_),
      U_plus(n_ + 1, nx),
      U_minus(n_ + 1, nx),
      V_plus(n_ + 1, nx),
      V_minus(n_ + 1, nx),
      xi_plus(n_ + 1, nx, 1.0),
      xi_minus(n_ + 1, nx, 1.0) {}

namespace {

void xi_column(std::span<const double> U, std::span<const double> V, std::span<const double> s,
               std::span<double> xi) {
  const std::size_t n = xi.size() - 1;
  xi[n] = 1.0;
  double f_hi = 3.0 * U[n] + V[n];
  for (std::size_t j = n; j-- > 0;) {
    const double f_lo = 3.0 * U[j] + V[j];
    xi[j] = xi[j + 1] - 0.125 * (s[j + 1] - s[j]) * (f_lo + f_hi);
    f_hi = f_lo;
  }
}

// V = A xi(U, V) by fixed-point iteration; false if it fails to settle.
bool v_column(std::span<const double> U, std::span<const double> A, std::span<const double> s, std::span<double> V,
              std::span<double> xi, double tol, int max_iter, double& change) {
  const std::size_t n = V.size() - 1;
  change = 0.0;
  for (int k = 0; k < max_iter; ++k) {
    xi_column(U, V, s, xi);
    double d = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      const double v = A[j] * xi[j];
      d = std::max(d, std::abs(v - V[j]));
      V[j] = v;
    }
    change = std::max(change, d);
    if (d < tol) {
      xi_column(U, V, s, xi);
      return true;
    }
  }
  return false;
}

struct Family {
  std::vector<double> A, d2h, G;
  double p = 0.0;
};

// Coefficients that stay fixed while U, V iterate: A below the top node,
// phi'(eta(0)) and h''(eta).
void prepare_family(Family& f, std::span<const double> eta, const GridFunction& u_self0,
                    const std::vector<GridFunction>& u_other, const BathymetryProfile& profile,
                    std::span<const double> s) {
  const std::size_t n = eta.size() - 1;
  f.A.assign(n + 1, 0.0);
  f.d2h.assign(n + 1, 0.0);
  f.G.assign(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) f.A[j] = u_other[j](eta[j]);
  if (!profile.flat()) {
    for (std::size_t j = 0; j <= n; ++j) f.d2h[j] = eval_bathymetry(profile, eta[j]).d2h;
  }
  f.p = u_self0(eta[0]);
  f.G[0] = f.p;
  for (std::size_t j = 1; j <= n; ++j) f.G[j] = f.G[j - 1] + 0.5 * (s[j] - s[j - 1]) * (f.d2h[j - 1] + f.d2h[j]);
}

// U(s_j) = p xi(0) + int_0^{s_j} h'' xi.
double u_update(const Family& f, std::span<const double> xi, std::span<const double> s, std::span<double> U) {
  const std::size_t n = U.size() - 1;
  double d = 0.0;
  double acc = f.p * xi[0];
  d = std::max(d, std::abs(acc - U[0]));
  U[0] = acc;
  for (std::size_t j = 1; j <= n; ++j) {
    acc += 0.5 * (s[j] - s[j - 1]) * (f.d2h[j - 1] * xi[j - 1] + f.d2h[j] * xi[j]);
    d = std::max(d, std::abs(acc - U[j]));
    U[j] = acc;
  }
  return d;
}

enum class ColumnStatus : unsigned char { ok, v_stalled, u_stalled, ball };

struct Scratch {
  Family plus, minus;
};

void check_history(const DiagonalHistory& history, std::size_t n) {
  if (history.u_plus.size() < n || history.u_minus.size() < n || history.z_plus.size() < n) {
    throw Error(ErrorKind::domain, "derivative history does not cover the nodes below the target");
  }
}

}  // namespace

DerivativeField v_from_u(const ColumnArray& U_plus, const ColumnArray& U_minus, const CharacteristicField& field,
                         const DiagonalHistory& history, const WindowGrid& grid, const SolverOptions& options) {
  const std::size_t n = field.n;
  const std::size_t nx = field.Z_plus.nx();
  check_history(history, n);
  const std::span<const double> s(grid.s.data(), n + 1);
  DerivativeField d(n, nx);
  d.U_plus = U_plus;
  d.U_minus = U_minus;
  std::vector<ColumnStatus> status(nx, ColumnStatus::ok);

  for_columns(nx, options.exec, [&](std::size_t i) {
    std::vector<double> A(n + 1);
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) A[j] = history.u_minus[j](field.eta_plus(j, i));
    A[n] = U_minus(n, i);
    if (!v_column(d.U_plus.column(i), A, s, d.V_plus.column(i), d.xi_plus.column(i), options.tol_inner,
                  options.max_inner, change)) {
      status[i] = ColumnStatus::v_stalled;
      return;
    }
    for (std::size_t j = 0; j < n; ++j) A[j] = history.u_plus[j](field.eta_minus(j, i));
    A[n] = U_plus(n, i);
    if (!v_column(d.U_minus.column(i), A, s, d.V_minus.column(i), d.xi_minus.column(i), options.tol_inner,
                  options.max_inner, change)) {
      status[i] = ColumnStatus::v_stalled;
    }
  });
  for (std::size_t i = 0; i < nx; ++i) {
    if (status[i] != ColumnStatus::ok)
      throw Error(ErrorKind::convergence, "v_from_u did not settle at x=" + std::to_string(grid.x[i]));
  }
  return d;
}

DerivativeField solve_uv(const CharacteristicField& field, const DiagonalHistory& history,
                         const BathymetryProfile& profile, const WindowGrid& grid, const SolverOptions& options,
                         double ball_radius) {
  const std::size_t n = field.n;
  const std::size_t nx = field.Z_plus.nx();
  check_history(history, n);
  const std::span<const double> s(grid.s.data(), n + 1);
  DerivativeField d(n, nx);
  std::vector<ColumnStatus> status(nx, ColumnStatus::ok);
  std::vector<int> iterations(nx, 0);

  for_columns(nx, options.exec, [&](std::size_t i) {
    thread_local Scratch sc;
    prepare_family(sc.plus, field.eta_plus.column(i), history.u_plus[0], history.u_minus, profile, s);
    prepare_family(sc.minus, field.eta_minus.column(i), history.u_minus[0], history.u_plus, profile, s);
    auto Up = d.U_plus.column(i), Um = d.U_minus.column(i);
    auto Vp = d.V_plus.column(i), Vm = d.V_minus.column(i);
    auto xp = d.xi_plus.column(i), xm = d.xi_minus.column(i);
    std::copy(sc.plus.G.begin(), sc.plus.G.end(), Up.begin());
    std::copy(sc.minus.G.begin(), sc.minus.G.end(), Um.begin());
    std::copy(sc.plus.A.begin(), sc.plus.A.end(), Vp.begin());
    std::copy(sc.minus.A.begin(), sc.minus.A.end(), Vm.begin());
    Vp[n] = Um[n];
    Vm[n] = Up[n];

    for (int k = 0; k < options.max_inner; ++k) {
      iterations[i] = k + 1;
      sc.plus.A[n] = Um[n];
      sc.minus.A[n] = Up[n];
      double cv_p = 0.0, cv_m = 0.0;
      if (!v_column(Up, sc.plus.A, s, Vp, xp, options.tol_inner, options.max_inner, cv_p) ||
          !v_column(Um, sc.minus.A, s, Vm, xm, options.tol_inner, options.max_inner, cv_m)) {
        status[i] = ColumnStatus::v_stalled;
        return;
      }
      const double cu = std::max(u_update(sc.plus, xp, s, Up), u_update(sc.minus, xm, s, Um));
      if (detail::sup_abs(Up) + detail::sup_abs(Um) > ball_radius) {
        status[i] = ColumnStatus::ball;
        return;
      }
      if (std::max({cu, cv_p, cv_m}) < options.tol_inner) {
        sc.plus.A[n] = Um[n];
        sc.minus.A[n] = Up[n];
        double c = 0.0;
        if (!v_column(Up, sc.plus.A, s, Vp, xp, options.tol_inner, options.max_inner, c) ||
            !v_column(Um, sc.minus.A, s, Vm, xm, options.tol_inner, options.max_inner, c)) {
          status[i] = ColumnStatus::v_stalled;
        }
        return;
      }
    }
    status[i] = ColumnStatus::u_stalled;
  });

  for (std::size_t i = 0; i < nx; ++i) {
    char buf[160];
    switch (status[i]) {
      case ColumnStatus::ok:
        break;
      case ColumnStatus::ball:
        std::snprintf(buf, sizeof buf, "derivative iterate left the ball of radius %.6g at x=%.17g", ball_radius,
                      grid.x[i]);
        throw Error(ErrorKind::ball_escape, buf);
      case ColumnStatus::v_stalled:
        throw Error(ErrorKind::convergence, "V iteration did not settle at x=" + std::to_string(grid.x[i]));
      case ColumnStatus::u_stalled:
        throw Error(ErrorKind::convergence, "U iteration did not settle at x=" + std::to_string(grid.x[i]));
    }
  }
  d.iterations = *std::max_element(iterations.begin(), iterations.end());
  d.ball_norm = sup_abs(d.U_plus.raw()) + sup_abs(d.U_minus.raw());
  if (d.ball_norm > ball_radius) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "derivative field norm %.6g exceeds ball radius %.6g", d.ball_norm, ball_radius);
    throw Error(ErrorKind::ball_escape, buf);
  }
  compute_xi(d, grid, options.exec);
  return d;
}

void compute_xi(DerivativeField& d, const WindowGrid& grid, Exec exec) {
  const std::size_t nx = d.U_plus.nx();
  const std::span<const double> s(grid.s.data(), d.n + 1);
  for_columns(nx, exec, [&](std::size_t i) {
    xi_column(d.U_plus.column(i), d.V_plus.column(i), s, d.xi_plus.column(i));
    xi_column(d.U_minus.column(i), d.V_minus.column(i), s, d.xi_minus.column(i));
  });
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j <= d.n; ++j) {
      const double v = std::min(d.xi_plus(j, i), d.xi_minus(j, i));
      if (!(v > 0.0)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "Jacobian collapse xi=%.6g at s=%.17g, x=%.17g", v, grid.s[j], grid.x[i]);
        throw Error(ErrorKind::jacobian_collapse, buf);
      }
    }
  }
}

XiPair xi_exponential_form(const CharacteristicField& field, const DiagonalHistory& history, const WindowGrid& grid,
                           Exec exec) {
  const std::size_t n = field.n;
  const std::size_t nx = field.Z_plus.nx();
  if (history.u_plus.size() < n + 1 || history.u_minus.size() < n + 1)
    throw Error(ErrorKind::domain, "xi_exponential_form: derivative history must include the target node");
  const std::span<const double> s(grid.s.data(), n + 1);
  XiPair out{ColumnArray(n + 1, nx, 1.0), ColumnArray(n + 1, nx, 1.0)};

  auto family = [&](std::span<const double> eta, const std::vector<GridFunction>& self,
                    const std::vector<GridFunction>& other, std::span<double> xi) {
    double g_hi = 3.0 * self[n](eta[n]) + other[n](eta[n]);
    double expo = 0.0;
    xi[n] = 1.0;
    for (std::size_t j = n; j-- > 0;) {
      const double g_lo = 3.0 * self[j](eta[j]) + other[j](eta[j]);
      expo += 0.125 * (s[j + 1] - s[j]) * (g_lo + g_hi);
      xi[j] = std::exp(-expo);
      g_hi = g_lo;
    }
  };
  for_columns(nx, exec, [&](std::size_t i) {
    family(field.eta_plus.column(i), history.u_plus, history.u_minus, out.plus.column(i));
    family(field.eta_minus.column(i), history.u_minus, history.u_plus, out.minus.column(i));
  });
  return out;
}

NodeHook derivative_hook(const BathymetryProfile& profile, const WindowGrid& grid, const SolverOptions& options,
                         double ball_radius, DerivativeObserver observer) {
  return [&profile, &grid, options, ball_radius, observer = std::move(observer)](
             std::size_t n, const FixedTimeResult& result, DiagonalHistory& history) {
    DerivativeField d;
    try {
      d = solve_uv(result.field, history, profile, grid, options, ball_radius);
    } catch (const Error& e) {
      throw Error(e.kind(), node_prefix(n, history.t.back()) + e.what());
    }
    history.push_derivatives(grid.dx, d.U_plus.row(n), d.U_minus.row(n), d.xi_plus.row(0), d.xi_minus.row(0));
    if (observer) observer(n, result, d);
  };
}

WindowResult solve_window_uv(DiagonalHistory seed, const BathymetryProfile& profile, const WindowGrid& grid,
                             const SolverOptions& options, const WindowBudget& budget, DerivativeObserver observer) {
  if (!seed.has_derivatives()) throw Error(ErrorKind::domain, "solve_window_uv: seed lacks u+-");
  const double radius = budget.ball_radius > 0.0 ? budget.ball_radius
                                                 : 15.0 * static_cast<double>(budget.m + 1) * budget.C_phi;
  return solve_window(std::move(seed), profile, grid, options, budget,
                      derivative_hook(profile, grid, options, radius, std::move(observer)));
}

}  // namespace swaa
