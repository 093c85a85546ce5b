#include "swaa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "columns.hpp"
#include "swaa/error.hpp"

namespace swaa {

double burgers_exact(const std::function<double(double)>& phi_minus, double t, double x, double phi_sup) {
  if (t == 0.0) return phi_minus(x);
  auto g = [&](double x0) { return x0 + 0.75 * phi_minus(x0) * t - x; };
  double lo = x;
  double hi = x + 2.0 * phi_sup * t;

  // The map must increase across the bracket; a dip means characteristics crossed.
  constexpr int kProbe = 64;
  double prev = g(lo);
  const double g_lo = prev;
  for (int k = 1; k <= kProbe; ++k) {
    const double y = lo + (hi - lo) * k / kProbe;
    const double v = g(y);
    if (v < prev - 1e-14 * (1.0 + std::abs(prev))) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "characteristic map not monotone near x0=%.6g (t=%.6g, x=%.6g)", y, t, x);
      throw Error(ErrorKind::no_root, buf);
    }
    prev = v;
  }
  const double g_hi = prev;
  if (g_lo > 0.0 || g_hi < 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "no foot point in [%.6g, %.6g] (t=%.6g, x=%.6g)", lo, hi, t, x);
    throw Error(ErrorKind::no_root, buf);
  }
  if (g_lo == 0.0) return phi_minus(lo);
  if (g_hi == 0.0) return phi_minus(hi);

  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double v = g(mid);
    if (std::abs(v) < 1e-12 || mid == lo || mid == hi) return phi_minus(mid);
    (v < 0.0 ? lo : hi) = mid;
  }
  return phi_minus(0.5 * (lo + hi));
}

double breaking_time(std::span<const double> dphi_minus) {
  double mn = std::numeric_limits<double>::infinity();
  for (double v : dphi_minus) mn = std::min(mn, v);
  if (!(mn < 0.0)) return std::numeric_limits<double>::infinity();
  return -4.0 / (3.0 * mn);
}

UpwindResult upwind_reference(const ProblemSetup& setup, const BathymetryProfile& profile, double t_final,
                              const UpwindOptions& options) {
  const std::size_t nx = setup.x.size();
  if (nx < 2) throw Error(ErrorKind::domain, "upwind_reference needs at least two nodes");
  if (!(t_final > 0.0)) throw Error(ErrorKind::config, "upwind_reference: t_final must be positive");
  const double dx = setup.dx;

  UpwindResult out;
  out.x = setup.x;
  std::vector<double> zp = setup.phi_plus, zm = setup.phi_minus;
  std::vector<double> np(nx), nm(nx), dh(nx);
  for (std::size_t i = 0; i < nx; ++i) dh[i] = eval_bathymetry(profile, setup.x[i]).dh;

  auto max_speed = [&] {
    double c = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      const auto sp = characteristic_speeds(zp[i], zm[i]);
      if (!(sp.c_plus < 0.0) || !(sp.c_minus < 0.0)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "speed c+=%.6g, c-=%.6g is not negative at x=%.6g", sp.c_plus, sp.c_minus,
                      setup.x[i]);
        throw Error(ErrorKind::speed_sign, buf);
      }
      c = std::max({c, -sp.c_plus, -sp.c_minus});
    }
    return c;
  };

  double dt = options.dt;
  if (!(dt > 0.0)) dt = 0.5 * dx / max_speed();
  out.dt = dt;

  std::vector<double> stops = options.snapshot_times;
  stops.push_back(t_final);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  double t = 0.0;
  std::size_t next = 0;
  while (next < stops.size() && stops[next] <= 0.0) {
    out.t.push_back(0.0);
    out.z_plus.push_back(zp);
    out.z_minus.push_back(zm);
    ++next;
  }
  while (next < stops.size()) {
    const double target = stops[next];
    const double step = std::min(dt, target - t);
    const double c = max_speed();
    if (c * step / dx > options.cfl) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "CFL number %.4f exceeds %.4f", c * step / dx, options.cfl);
      throw Error(ErrorKind::cfl_violation, buf);
    }
    const double r = step / dx;
    detail::for_columns(nx, options.exec, [&](std::size_t i) {
      const std::size_t ir = i + 1 < nx ? i + 1 : i;
      const auto sp = characteristic_speeds(zp[i], zm[i]);
      np[i] = zp[i] - r * sp.c_plus * (zp[ir] - zp[i]) + step * dh[i];
      nm[i] = zm[i] - r * sp.c_minus * (zm[ir] - zm[i]) + step * dh[i];
    });
    std::swap(zp, np);
    std::swap(zm, nm);
    ++out.steps;
    t = (target - t <= dt) ? target : t + step;
    if (t == target) {
      out.t.push_back(t);
      out.z_plus.push_back(zp);
      out.z_minus.push_back(zm);
      ++next;
    }
  }
  return out;
}

namespace {

class HistoryField {
 public:
  explicit HistoryField(const DiagonalHistory& h) : h_(h) {}

  struct Sample {
    double z_self, z_other, u_other;
  };

  Sample at(double s, double y, Family f) const {
    const auto& t = h_.t;
    std::size_t k = 0;
    double w = 0.0;
    if (s >= t.back()) {
      k = t.size() - 1;
    } else if (s > t.front()) {
      k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), s) - t.begin()) - 1;
      w = (s - t[k]) / (t[k + 1] - t[k]);
    }
    auto lerp = [&](const std::vector<GridFunction>& g) {
      const double a = g[k](y);
      return w == 0.0 ? a : (1.0 - w) * a + w * g[k + 1](y);
    };
    const bool plus = f == Family::plus;
    return {lerp(plus ? h_.z_plus : h_.z_minus), lerp(plus ? h_.z_minus : h_.z_plus),
            lerp(plus ? h_.u_minus : h_.u_plus)};
  }

 private:
  const DiagonalHistory& h_;
};

}  // namespace

RiccatiTrace riccati_derivative(const DiagonalHistory& history, const BathymetryProfile& profile, Family family,
                                double x_start, double t_final, double step) {
  if (!history.has_derivatives()) throw Error(ErrorKind::domain, "riccati_derivative: history carries no u+-");
  if (!(step > 0.0)) throw Error(ErrorKind::config, "riccati_derivative: step must be positive");
  if (t_final > history.t.back() * (1.0 + 1e-12))
    throw Error(ErrorKind::domain, "riccati_derivative: t_final beyond the resolved history");
  const HistoryField field(history);
  const auto& u0 = family == Family::plus ? history.u_plus.front() : history.u_minus.front();

  auto rhs = [&](double s, double eta, double u, double& deta, double& du) {
    const auto v = field.at(s, eta, family);
    const double d2h = profile.flat() ? 0.0 : eval_bathymetry(profile, std::max(eta, 0.0)).d2h;
    deta = 0.25 * (3.0 * v.z_self + v.z_other);
    du = d2h - 0.75 * u * u - 0.25 * u * v.u_other;
  };

  RiccatiTrace tr;
  double s = history.t.front();
  double eta = x_start;
  double u = u0(x_start);
  tr.t.push_back(s);
  tr.eta.push_back(eta);
  tr.u.push_back(u);
  while (s < t_final) {
    const bool last = t_final - s <= step * (1.0 + 1e-9);
    const double h = last ? t_final - s : step;
    double k1e, k1u, k2e, k2u, k3e, k3u, k4e, k4u;
    rhs(s, eta, u, k1e, k1u);
    rhs(s + 0.5 * h, eta + 0.5 * h * k1e, u + 0.5 * h * k1u, k2e, k2u);
    rhs(s + 0.5 * h, eta + 0.5 * h * k2e, u + 0.5 * h * k2u, k3e, k3u);
    rhs(s + h, eta + h * k3e, u + h * k3u, k4e, k4u);
    eta += h / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    s = last ? t_final : s + h;
    if (!(std::abs(u) <= 1e6)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "Riccati blow-up |u|>1e6 at s=%.6g", s);
      throw Error(ErrorKind::blow_up, buf);
    }
    tr.t.push_back(s);
    tr.eta.push_back(eta);
    tr.u.push_back(u);
  }
  return tr;
}

}  // namespace swaa
