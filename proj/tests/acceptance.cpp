// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run one (N = 1..10, or 9b for the bound half of 9)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "swaa/continuation.hpp"
#include "swaa/derivatives.hpp"
#include "swaa/invariants.hpp"
#include "swaa/oracle.hpp"

using namespace swaa;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double sup_diff(std::span<const double> a, std::span<const double> b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

Outcome roundtrip() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> xd(0.0, 50.0), pd(0.0, 4.0), ed(1e-3, 10.0), slack(0.0, 5.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto prof = BathymetryProfile::power_law(pd(rng));
    const std::vector<double> x{xd(rng)}, eta{ed(rng)};
    const std::vector<double> u{-2.0 * std::sqrt(eval_bathymetry(prof, x[0]).h + eta[0]) - slack(rng)};
    const auto r = to_riemann(x, u, eta, prof);
    const auto b = from_riemann(x, r.plus, r.minus, prof);
    worst = std::max({worst, std::abs(b.u[0] - u[0]) / std::abs(u[0]), std::abs(b.eta[0] - eta[0]) / eta[0]});
  }
  return {worst <= 1e-12, fmt("max relative error %.3e over 1000 states", worst)};
}

Outcome steady() {
  auto r = test::prepare(scenarios::steady(1.0, 1.0), 10.0, 0.01, 0.01, 1.0);
  ContinuationOptions o;
  o.schedule = Schedule::rebased;
  const auto g = run_global(r.setup, r.scenario.profile, r.x_grid, r.params, 1.0, o);
  double dev = 0.0;
  for (std::size_t k = 0; k < g.history.size(); ++k) {
    dev = std::max(dev, sup_diff(g.history.z_plus[k].values(), r.setup.phi_plus, r.x_grid.n_interior + 1));
    dev = std::max(dev, sup_diff(g.history.z_minus[k].values(), r.setup.phi_minus, r.x_grid.n_interior + 1));
  }
  const bool done = g.ledger.completed && std::abs(g.history.t.back() - 1.0) < 1e-12;
  return {done && dev <= 1e-10,
          fmt("sup deviation %.3e to t=%.6g in %zu rebased windows", dev, g.history.t.back(), g.ledger.entries.size())};
}

double burgers_error(double h) {
  auto r = test::prepare(scenarios::burgers_linear(), 10.0, h, h, 0.1);
  const auto g = run_global(r.setup, r.scenario.profile, r.x_grid, r.params, 0.1, {});
  double err = 0.0;
  for (std::size_t k = 0; k < g.history.size(); ++k) {
    const auto& z = g.history.z_minus[k].values();
    for (std::size_t i = 0; i <= r.x_grid.n_interior; ++i)
      err = std::max(err, std::abs(z[i] - burgers_exact(r.scenario.data.phi_minus, g.history.t[k], r.x_grid.x[i], 2.0)));
    err = std::max(err, test::sup_abs(g.history.z_plus[k].values(), r.x_grid.n_interior + 1));
  }
  return err;
}

Outcome burgers() {
  const double e1 = burgers_error(1e-2);
  const double e2 = burgers_error(5e-3);
  const double ratio = e1 / e2;
  return {e1 <= 5e-3 && ratio >= 1.8, fmt("sup error %.3e at 1e-2, %.3e at 5e-3, ratio %.3f", e1, e2, ratio)};
}

Outcome contraction() {
  auto r = test::prepare(scenarios::waterfall(1.0, 1.0), 10.0, 0.01, 0.01, 1.0);
  const double T = 1.0 / (75.0 * std::sqrt(2.0));
  std::vector<ConvergenceTrace> traces;
  ContinuationOptions o;
  o.on_window = [&](const WindowResult& w, const LedgerEntry&) { traces = w.traces; };
  const auto g = run_global(r.setup, r.scenario.profile, r.x_grid, r.params, T, o);
  const double floor = 1e3 * kEps;
  double worst_inner = 0.0, worst_outer = 0.0;
  std::size_t n_inner = 0, n_outer = 0;
  for (const auto& tr : traces) {
    for (const auto& inner : tr.inner) {
      for (std::size_t k = 1; k < inner.size(); ++k) {
        if (inner[k - 1].weighted <= floor || inner[k].weighted <= floor) continue;
        worst_inner = std::max(worst_inner, inner[k].weighted / inner[k - 1].weighted);
        ++n_inner;
      }
    }
    for (std::size_t k = 1; k < tr.outer_z_distance.size(); ++k) {
      if (tr.outer_z_distance[k - 1] <= floor || tr.outer_z_distance[k] <= floor) continue;
      worst_outer = std::max(worst_outer, tr.outer_z_distance[k] / tr.outer_z_distance[k - 1]);
      ++n_outer;
    }
  }
  const bool one_window = g.ledger.entries.size() == 1 && std::abs(g.ledger.entries[0].length - T) <= 4 * kEps * T;
  return {one_window && n_inner > 0 && worst_inner <= 0.55 && worst_outer <= 1.0 / 35.0 + 0.05,
          fmt("T=%.8f, worst inner ratio %.3e (%zu), worst outer ratio %.3e (%zu)", T, worst_inner, n_inner,
              worst_outer, n_outer)};
}

struct WaterfallRun {
  test::Run run;
  GlobalResult result;
};

const WaterfallRun& waterfall_six() {
  static const WaterfallRun w = [] {
    const double C = 5.0 * std::sqrt(2.0);
    double H = 0.0;
    for (int k = 1; k <= 6; ++k) H += 1.0 / k;
    const double t_final = H / (15.0 * C);
    WaterfallRun out{test::prepare(scenarios::waterfall(1.0, 1.0), 10.0, 0.01, 0.01, t_final), {}};
    out.result = run_global(out.run.setup, out.run.scenario.profile, out.run.x_grid, out.run.params, t_final, {});
    return out;
  }();
  return w;
}

Outcome closure() {
  const auto& g = waterfall_six().result;
  const auto& c = g.ledger.closure;
  std::string worst;
  double worst_v = 0.0;
  for (const auto& k : c.constraints) {
    if (k.worst >= worst_v) {
      worst_v = k.worst;
      worst = k.name;
    }
  }
  return {g.ledger.entries.size() >= 5 && c.pass && c.nodes_audited > 0,
          fmt("%zu windows, %zu nodes audited, largest violation %.3e (%s)", g.ledger.entries.size(), c.nodes_audited,
              worst_v, worst.c_str())};
}

Outcome improved_bound() {
  const auto& e = waterfall_six().result.ledger.entries.front();
  const double C = 5.0 * std::sqrt(2.0);
  const double s = std::max(e.sup_u_plus, e.sup_u_minus);
  return {s <= 2.0 * C + 1e-6, fmt("sup|d_x z| at T_1 = %.6f, bound 2 C_phi = %.6f", s, 2.0 * C)};
}

Outcome ledger() {
  const auto& g = waterfall_six().result;
  const double C = 5.0 * std::sqrt(2.0);
  bool ok = g.ledger.entries.size() >= 5;
  double worst_ulp = 0.0, worst_margin = -std::numeric_limits<double>::infinity();
  double H = 0.0;
  for (std::size_t m = 1; m <= std::min<std::size_t>(5, g.ledger.entries.size()); ++m) {
    const auto& e = g.ledger.entries[m - 1];
    H += 1.0 / static_cast<double>(m);
    const double expected = H / (15.0 * C);
    const double ulps = std::abs(e.T_m - expected) / (kEps * expected);
    worst_ulp = std::max(worst_ulp, ulps);
    worst_margin = std::max(worst_margin, e.c1_norm - static_cast<double>(m + 1) * C);
    ok = ok && e.harmonic_binds && ulps <= 4.0 && e.c1_norm <= static_cast<double>(m + 1) * C + 1e-6;
  }
  return {ok, fmt("T_m off by at most %.1f ulp, max of c1 - (m+1) C_phi = %.4f", worst_ulp, worst_margin)};
}

Outcome breaking() {
  auto r = test::prepare(scenarios::burgers_tanh(5.0), 3.0, 2e-3, 2e-3, 1.5);
  BreakingMonitor mon(100.0);
  ContinuationOptions o;
  o.schedule = Schedule::rebased;
  o.require = Requirement::local;
  o.monitor = &mon;
  o.keep_stride = 0;
  o.audit_closure = false;
  run_global(r.setup, r.scenario.profile, r.x_grid, r.params, 1.5, o);
  const auto& v = mon.verdict();
  return {v.broken && v.t_star >= 1.2 && v.t_star <= 1.47,
          fmt("cause %s, t* = %.5f at x = %.4f (analytic t_b = %.5f)", v.cause.c_str(), v.t_star, v.x_star,
              breaking_time(r.setup.dphi_minus))};
}

double triangulation(double dx, const UpwindResult& up, double fdx) {
  const double tf = 0.009;
  auto r = test::prepare(scenarios::waterfall(1.0, 1.0), 10.0, dx, dx, tf);
  const auto g = run_global(r.setup, r.scenario.profile, r.x_grid, r.params, tf, {});
  double d = 0.0;
  for (std::size_t i = 0; i <= r.x_grid.n_interior; ++i) {
    const auto fi = static_cast<std::size_t>(std::llround(r.x_grid.x[i] / fdx));
    d = std::max({d, std::abs(g.history.z_plus.back().values()[i] - up.z_plus.back()[fi]),
                  std::abs(g.history.z_minus.back().values()[i] - up.z_minus.back()[fi])});
  }
  return d;
}

Outcome oracle_triangulation(bool with_refinement) {
  const double tf = 0.009, fdx = 1e-3;
  auto f = test::prepare(scenarios::waterfall(1.0, 1.0), 10.0, fdx, fdx, tf);
  const auto up = upwind_reference(f.setup, f.scenario.profile, tf);
  const double d1 = triangulation(1e-2, up, fdx);
  if (!with_refinement) return {d1 <= 1e-2, fmt("sup difference %.3e at solver dx 1e-2", d1)};
  const double d2 = triangulation(5e-3, up, fdx);
  return {d1 <= 1e-2 && d2 < d1,
          fmt("sup difference %.6e at dx 1e-2, %.6e at dx 5e-3 (upwind error dominates)", d1, d2)};
}

Outcome xi_consistency() {
  const double tf = 0.05;
  auto r = test::prepare(scenarios::burgers_linear(), 10.0, 0.01, 0.01, tf);
  DerivativeField last;
  double worst_rel = 0.0;
  ContinuationOptions o;
  o.on_node = [&](const NodeEvent& e) {
    if (e.n == e.grid.last()) last = e.derivatives;
  };
  // x = 0 column of the final window, for the characteristic check.
  std::vector<double> s_last, eta_last, u_last;
  o.on_window = [&](const WindowResult& w, const LedgerEntry& entry) {
    const auto grid = window_on(r.x_grid, entry.length, entry.dt);
    const auto ex = xi_exponential_form(w.last_field, w.history, grid, Exec::parallel);
    for (std::size_t i = 0; i <= r.x_grid.n_interior; ++i) {
      for (std::size_t j = 0; j <= last.n; ++j) {
        worst_rel = std::max(worst_rel, std::abs(ex.minus(j, i) - last.xi_minus(j, i)) / last.xi_minus(j, i));
        worst_rel = std::max(worst_rel, std::abs(ex.plus(j, i) - last.xi_plus(j, i)) / last.xi_plus(j, i));
      }
    }
    s_last.clear();
    eta_last.clear();
    u_last.clear();
    for (std::size_t j = 0; j <= last.n; ++j) {
      s_last.push_back(entry.t_start + grid.s[j]);
      eta_last.push_back(w.last_field.eta_minus(j, 0));
      u_last.push_back(last.U_minus(j, 0) / last.xi_minus(j, 0));
    }
  };
  const auto g = run_global(r.setup, r.scenario.profile, r.x_grid, r.params, tf, o);

  // Foot of the minus characteristic reaching x = 0 at tf, by bisection on the Riccati trace.
  auto end_of = [&](double x0) { return riccati_derivative(g.history, r.scenario.profile, Family::minus, x0, tf, 1e-4); };
  double lo = 0.0, hi = 0.5;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (end_of(mid).eta.back() < 0.0 ? lo : hi) = mid;
  }
  const auto tr = end_of(0.5 * (lo + hi));
  double worst_u = 0.0;
  for (std::size_t j = 0; j < s_last.size(); ++j) {
    const auto it = std::lower_bound(tr.t.begin(), tr.t.end(), s_last[j] - 1e-14);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - tr.t.begin()), tr.t.size() - 1);
    const std::size_t k0 = k == 0 ? 0 : k - 1;
    const double w = tr.t[k] == tr.t[k0] ? 1.0 : (s_last[j] - tr.t[k0]) / (tr.t[k] - tr.t[k0]);
    const double u = (1.0 - w) * tr.u[k0] + w * tr.u[k];
    worst_u = std::max(worst_u, std::abs(u - u_last[j]));
  }
  // The trace also against the diagonal history u-(t, eta(t)) over all of [0, tf].
  for (std::size_t k = 0; k < g.history.size(); ++k) {
    const auto it = std::lower_bound(tr.t.begin(), tr.t.end(), g.history.t[k] - 1e-14);
    if (it == tr.t.end()) continue;
    const std::size_t q = static_cast<std::size_t>(it - tr.t.begin());
    if (std::abs(tr.t[q] - g.history.t[k]) > 1e-12) continue;
    worst_u = std::max(worst_u, std::abs(tr.u[q] - g.history.u_minus[k](tr.eta[q])));
  }
  return {worst_rel <= 1e-3 && worst_u <= 5e-3,
          fmt("xi forms differ by %.3e relative, Riccati vs U/xi differ by %.3e", worst_rel, worst_u)};
}

struct Criterion {
  std::string id;
  double limit_s;  // runtime budget, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"1", 1.0, roundtrip},
      {"2", 10.0, steady},
      {"3", 60.0, burgers},
      {"4", 30.0, contraction},
      {"5", 120.0, closure},
      {"6", 0.0, improved_bound},
      {"7", 0.0, ledger},
      {"8", 120.0, breaking},
      {"9", 0.0, [] { return oracle_triangulation(true); }},
      {"9b", 0.0, [] { return oracle_triangulation(false); }},
      {"10", 0.0, xi_consistency},
  };
  std::string only;
  for (int a = 1; a < argc; ++a) {
    if (std::strcmp(argv[a], "--criterion") == 0 && a + 1 < argc) only = argv[++a];
  }

  int failures = 0, ran = 0;
  for (const auto& c : all) {
    if (only.empty() ? c.id == "9b" : c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_s <= 0.0 || secs < c.limit_s;
    const bool pass = o.pass && in_time;
    std::printf("%s criterion %s: %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", c.id.c_str(), o.detail.c_str(), secs,
                in_time ? "" : " over budget");
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
