#include "swaa/picard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "columns.hpp"
#include "swaa/error.hpp"

namespace swaa {

using detail::for_columns;
using detail::node_prefix;
using detail::sup_diff;

std::vector<double> ColumnArray::row(std::size_t j) const {
  std::vector<double> r(nx_);
  for (std::size_t i = 0; i < nx_; ++i) r[i] = data_[i * ns_ + j];
  return r;
}

CharacteristicField::CharacteristicField(std::size_t n_, std::size_t nx)
    : n(n_),
      Z_plus(n_ + 1, nx),
      Z_minus(n_ + 1, nx),
      Y_plus(n_ + 1, nx),
      Y_minus(n_ + 1, nx),
      eta_plus(n_ + 1, nx),
      eta_minus(n_ + 1, nx) {}

void DiagonalHistory::push_solution(double time, double dx, std::vector<double> zp, std::vector<double> zm) {
  t.push_back(time);
  z_plus.emplace_back(0.0, dx, std::move(zp));
  z_minus.emplace_back(0.0, dx, std::move(zm));
}

void DiagonalHistory::push_derivatives(double dx, std::vector<double> up, std::vector<double> um,
                                       std::vector<double> xip, std::vector<double> xim) {
  u_plus.emplace_back(0.0, dx, std::move(up));
  u_minus.emplace_back(0.0, dx, std::move(um));
  xi_plus.push_back(std::move(xip));
  xi_minus.push_back(std::move(xim));
}

DiagonalHistory make_seed(double t0, double dx, std::vector<double> z_plus, std::vector<double> z_minus,
                          std::vector<double> u_plus, std::vector<double> u_minus) {
  DiagonalHistory h;
  const std::size_t nx = z_plus.size();
  h.push_solution(t0, dx, std::move(z_plus), std::move(z_minus));
  if (!u_plus.empty()) {
    h.push_derivatives(dx, std::move(u_plus), std::move(u_minus), std::vector<double>(nx, 1.0),
                       std::vector<double>(nx, 1.0));
  }
  return h;
}

DiagonalHistory make_seed(const ProblemSetup& setup) {
  return make_seed(0.0, setup.dx, setup.phi_plus, setup.phi_minus, setup.dphi_plus, setup.dphi_minus);
}

namespace {

// eta(s_j) = x - (1/4) int_{s_j}^{s_n} (3 Z + Y), cumulative trapezoid from the top node down.
void trace_column(std::span<const double> Z, std::span<const double> Y, std::span<const double> s, double x,
                  std::span<double> eta) {
  const std::size_t n = eta.size() - 1;
  eta[n] = x;
  double f_hi = 3.0 * Z[n] + Y[n];
  for (std::size_t j = n; j-- > 0;) {
    const double f_lo = 3.0 * Z[j] + Y[j];
    eta[j] = eta[j + 1] - 0.125 * (s[j + 1] - s[j]) * (f_lo + f_hi);
    f_hi = f_lo;
  }
}

struct ColumnDistance {
  double dz_plus = 0.0, dz_minus = 0.0, dy_plus = 0.0, dy_minus = 0.0;
  bool finite = true;
};

// Z(s_j) = phi(eta(0)) + int_0^{s_j} h'(eta), Y(s_j) = z_other(s_j, eta(s_j)).
void sweep_family(std::span<const double> Z_in, std::span<const double> Y_in, std::span<double> Z_out,
                  std::span<double> Y_out, std::span<double> eta, const GridFunction& phi,
                  const std::vector<GridFunction>& other, double top_other, const BathymetryProfile& profile,
                  std::span<const double> s, double x, bool& finite) {
  const std::size_t n = eta.size() - 1;
  trace_column(Z_in, Y_in, s, x, eta);
  for (std::size_t j = 0; j <= n; ++j) {
    if (!std::isfinite(eta[j])) {
      finite = false;
      return;
    }
  }
  Z_out[0] = phi(eta[0]);
  double dh_lo = profile.flat() ? 0.0 : eval_bathymetry(profile, eta[0]).dh;
  for (std::size_t j = 1; j <= n; ++j) {
    const double dh_hi = profile.flat() ? 0.0 : eval_bathymetry(profile, eta[j]).dh;
    Z_out[j] = Z_out[j - 1] + 0.5 * (s[j] - s[j - 1]) * (dh_lo + dh_hi);
    dh_lo = dh_hi;
  }
  for (std::size_t j = 0; j < n; ++j) Y_out[j] = other[j](eta[j]);
  Y_out[n] = top_other;
}

}  // namespace

void trace_coordinates(CharacteristicField& field, const WindowGrid& grid, Exec exec) {
  const std::span<const double> s(grid.s.data(), field.n + 1);
  for_columns(field.Z_plus.nx(), exec, [&](std::size_t i) {
    trace_column(field.Z_plus.column(i), field.Y_plus.column(i), s, grid.x[i], field.eta_plus.column(i));
    trace_column(field.Z_minus.column(i), field.Y_minus.column(i), s, grid.x[i], field.eta_minus.column(i));
  });
}

InnerStep inner_sweep(const CharacteristicField& in, CharacteristicField& out, const DiagonalView& diagonal,
                      const BathymetryProfile& profile, const WindowGrid& grid, Exec exec) {
  const std::size_t n = in.n;
  const std::size_t nx = in.Z_plus.nx();
  if (diagonal.history.size() < n) throw Error(ErrorKind::domain, "inner_sweep: diagonal history too short");
  const std::span<const double> s(grid.s.data(), n + 1);
  const auto& hist = diagonal.history;

  std::vector<ColumnDistance> dist(nx);
  for_columns(nx, exec, [&](std::size_t i) {
    ColumnDistance& d = dist[i];
    sweep_family(in.Z_plus.column(i), in.Y_plus.column(i), out.Z_plus.column(i), out.Y_plus.column(i),
                 out.eta_plus.column(i), hist.z_plus[0], hist.z_minus, diagonal.top_minus[i], profile, s, grid.x[i],
                 d.finite);
    if (!d.finite) return;
    sweep_family(in.Z_minus.column(i), in.Y_minus.column(i), out.Z_minus.column(i), out.Y_minus.column(i),
                 out.eta_minus.column(i), hist.z_minus[0], hist.z_plus, diagonal.top_plus[i], profile, s, grid.x[i],
                 d.finite);
    if (!d.finite) return;
    d.dz_plus = sup_diff(in.Z_plus.column(i), out.Z_plus.column(i));
    d.dz_minus = sup_diff(in.Z_minus.column(i), out.Z_minus.column(i));
    d.dy_plus = sup_diff(in.Y_plus.column(i), out.Y_plus.column(i));
    d.dy_minus = sup_diff(in.Y_minus.column(i), out.Y_minus.column(i));
  });

  ColumnDistance total;
  for (std::size_t i = 0; i < nx; ++i) {
    if (!dist[i].finite) {
      throw Error(ErrorKind::evaluation, "non-finite characteristic coordinate in column x=" + std::to_string(grid.x[i]));
    }
    total.dz_plus = std::max(total.dz_plus, dist[i].dz_plus);
    total.dz_minus = std::max(total.dz_minus, dist[i].dz_minus);
    total.dy_plus = std::max(total.dy_plus, dist[i].dy_plus);
    total.dy_minus = std::max(total.dy_minus, dist[i].dy_minus);
  }
  out.n = n;
  return {std::max(total.dz_plus, total.dz_minus), std::max(total.dy_plus, total.dy_minus),
          std::max(3.0 * total.dz_plus + total.dy_plus, 3.0 * total.dz_minus + total.dy_minus)};
}

namespace {

void check_signs(const CharacteristicField& f, const WindowGrid& grid, double tol, std::size_t n) {
  const std::size_t nx = f.Z_plus.nx();
  auto fail = [&](const char* what, std::size_t j, std::size_t i, double v) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s broken at s=%.17g, x=%.17g (value %.3e)", what, grid.s[j], grid.x[i], v);
    throw Error(ErrorKind::invariant_violation, node_prefix(n, grid.s[n]) + buf);
  };
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j <= f.n; ++j) {
      if (f.eta_plus(j, i) - grid.x[i] < -tol) fail("eta+ >= x", j, i, f.eta_plus(j, i) - grid.x[i]);
      if (f.eta_minus(j, i) - grid.x[i] < -tol) fail("eta- >= x", j, i, f.eta_minus(j, i) - grid.x[i]);
      if (f.Z_plus(j, i) > tol) fail("Z+ <= 0", j, i, f.Z_plus(j, i));
      if (f.Z_minus(j, i) > tol) fail("Z- <= 0", j, i, f.Z_minus(j, i));
      if (f.Y_plus(j, i) > tol) fail("Y+ <= 0", j, i, f.Y_plus(j, i));
      if (f.Y_minus(j, i) > tol) fail("Y- <= 0", j, i, f.Y_minus(j, i));
    }
  }
}

double field_z_distance(const CharacteristicField& a, const CharacteristicField& b) {
  return sup_diff(a.Z_plus.raw(), b.Z_plus.raw()) + sup_diff(a.Z_minus.raw(), b.Z_minus.raw());
}

}  // namespace

FixedTimeResult solve_fixed_time(std::size_t n, const DiagonalHistory& history, const BathymetryProfile& profile,
                                 const WindowGrid& grid, const SolverOptions& options) {
  if (n == 0 || n > grid.last()) throw Error(ErrorKind::domain, "solve_fixed_time: target node out of range");
  if (history.size() < n) throw Error(ErrorKind::domain, "solve_fixed_time: diagonal unresolved below target");
  const std::size_t nx = grid.nx();

  std::vector<double> top_plus = history.z_plus[n - 1].values();
  std::vector<double> top_minus = history.z_minus[n - 1].values();

  FixedTimeResult res;
  CharacteristicField cur(n, nx);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      cur.Z_plus(j, i) = top_plus[i];
      cur.Z_minus(j, i) = top_minus[i];
      cur.Y_plus(j, i) = top_minus[i];
      cur.Y_minus(j, i) = top_plus[i];
    }
  }
  trace_coordinates(cur, grid, options.exec);
  CharacteristicField next = cur;
  CharacteristicField outer_prev = cur;

  bool outer_done = false;
  for (int outer = 0; outer < options.max_outer && !outer_done; ++outer) {
    const DiagonalView view{history, top_plus, top_minus};
    auto& steps = res.trace.inner.emplace_back();
    bool inner_done = false;
    for (int k = 0; k < options.max_inner; ++k) {
      const InnerStep step = inner_sweep(cur, next, view, profile, grid, options.exec);
      std::swap(cur, next);
      steps.push_back(step);
      if (std::max(step.dz, step.dy) < options.tol_inner) {
        inner_done = true;
        break;
      }
    }
    if (!inner_done) {
      throw Error(ErrorKind::convergence, node_prefix(n, grid.s[n]) + "inner iteration exhausted " +
                                              std::to_string(options.max_inner) + " sweeps");
    }
    std::vector<double> new_plus = cur.Z_plus.row(n);
    std::vector<double> new_minus = cur.Z_minus.row(n);
    const double change = std::max(sup_diff(new_plus, top_plus), sup_diff(new_minus, top_minus));
    res.trace.outer_diag_change.push_back(change);
    res.trace.outer_z_distance.push_back(field_z_distance(cur, outer_prev));
    outer_prev = cur;
    top_plus = std::move(new_plus);
    top_minus = std::move(new_minus);
    outer_done = change < options.tol_outer;
  }
  if (!outer_done) {
    throw Error(ErrorKind::convergence, node_prefix(n, grid.s[n]) + "outer iteration exhausted " +
                                            std::to_string(options.max_outer) + " updates");
  }

  // Close the top node on the accepted diagonal and re-trace.
  for (std::size_t i = 0; i < nx; ++i) {
    cur.Y_plus(n, i) = top_minus[i];
    cur.Y_minus(n, i) = top_plus[i];
  }
  trace_coordinates(cur, grid, options.exec);
  if (options.enforce_signs) check_signs(cur, grid, options.sign_tol, n);

  res.z_plus = std::move(top_plus);
  res.z_minus = std::move(top_minus);
  res.field = std::move(cur);
  return res;
}

WindowResult solve_window(DiagonalHistory seed, const BathymetryProfile& profile, const WindowGrid& grid,
                          const SolverOptions& options, const WindowBudget& budget, const NodeHook& hook) {
  if (seed.size() != 1) throw Error(ErrorKind::domain, "solve_window: seed must hold exactly one slice");
  if (seed.z_plus[0].size() != grid.nx()) throw Error(ErrorKind::domain, "solve_window: seed does not match grid");
  const std::size_t M = grid.last();
  const std::size_t nx = grid.nx();

  WindowResult out;
  if (budget.C_phi <= 0.0) {
    if (!profile.flat()) throw Error(ErrorKind::domain, "solve_window: C_phi = 0 with a sloping bottom");
    // Zero data over a flat bottom: the solution is exactly zero.
    out.history = std::move(seed);
    const bool with_u = out.history.has_derivatives();
    const double t0 = out.history.t.front();
    for (std::size_t n = 1; n <= M; ++n) {
      out.history.push_solution(t0 + grid.s[n], grid.dx, std::vector<double>(nx, 0.0), std::vector<double>(nx, 0.0));
      if (with_u) {
        out.history.push_derivatives(grid.dx, std::vector<double>(nx, 0.0), std::vector<double>(nx, 0.0),
                                     std::vector<double>(nx, 1.0), std::vector<double>(nx, 1.0));
      }
    }
    out.traces.resize(M);
    out.last_field = CharacteristicField(M, nx);
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j <= M; ++j) {
        out.last_field.eta_plus(j, i) = grid.x[i];
        out.last_field.eta_minus(j, i) = grid.x[i];
      }
    }
    return out;
  }
  if (options.check_window) {
    const double cap = window_length(budget.m, budget.C_phi, budget.C_h);
    if (grid.T > cap * (1.0 + 1e-12)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "window length %.17g exceeds admissible %.17g", grid.T, cap);
      throw Error(ErrorKind::domain, buf);
    }
  }

  const double t0 = seed.t.front();
  out.history = std::move(seed);
  out.traces.reserve(M);
  for (std::size_t n = 1; n <= M; ++n) {
    FixedTimeResult r = solve_fixed_time(n, out.history, profile, grid, options);
    out.history.push_solution(t0 + grid.s[n], grid.dx, r.z_plus, r.z_minus);
    if (hook) hook(n, r, out.history);
    out.traces.push_back(std::move(r.trace));
    if (n == M) out.last_field = std::move(r.field);
  }
  return out;
}

}  // namespace swaa
