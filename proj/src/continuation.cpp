#include "swaa/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "columns.hpp"
#include "swaa/error.hpp"

namespace swaa {

using detail::sup_abs;

double speed_bound(double sup_phi, double C_h, double t_final) { return sup_phi + C_h * t_final; }

namespace {

double data_sup(const ProblemSetup& s) { return std::max(sup_abs(s.phi_plus), sup_abs(s.phi_minus)); }

}  // namespace

ProblemSetup prepare_setup(const InitialData& data, const BathymetryProfile& profile, const GridParams& params,
                           double t_final, WindowGrid& x_grid, double norm_safety) {
  if (!(params.dx > 0.0)) throw Error(ErrorKind::config, "grid.dx must be positive");
  if (!(params.x_max > 0.0)) throw Error(ErrorKind::config, "domain.x_max must be positive");
  if (!(t_final > 0.0)) throw Error(ErrorKind::config, "run.t_final must be positive");

  // First pass on [0, x_max] sizes the buffer; a second pass on the buffered
  // grid settles the constants. Widen once more if they grew.
  std::vector<double> x = make_x_nodes(params.x_max, params.dx, 0.0, 0.0);
  ProblemSetup setup = make_setup(data, profile, x, norm_safety);
  double c_max = speed_bound(data_sup(setup), setup.C_h, t_final);
  for (int pass = 0; pass < 3; ++pass) {
    std::size_t n_interior = 0;
    double buffer = 0.0;
    x = make_x_nodes(params.x_max, params.dx, c_max, t_final, &n_interior, &buffer);
    setup = make_setup(data, profile, x, norm_safety);
    x_grid = WindowGrid{};
    x_grid.dx = params.dx;
    x_grid.n_interior = n_interior;
    x_grid.buffer = buffer;
    x_grid.x = setup.x;
    const double c_new = speed_bound(data_sup(setup), setup.C_h, t_final);
    if (c_new <= c_max) break;
    c_max = c_new;
  }
  return setup;
}

std::size_t harmonic_window_count(double C_phi, double C_h, double t_final, std::size_t max_windows,
                                  double min_window) {
  double t = 0.0;
  std::size_t m = 0;
  while (t < t_final) {
    const double len = window_length(m, C_phi, C_h);
    if (len < min_window) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "window %zu length %.3e underflows before t_final=%.6g", m + 1, len, t_final);
      throw Error(ErrorKind::schedule_stall, buf);
    }
    ++m;
    if (m > max_windows) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "harmonic schedule needs more than %zu windows to reach t_final=%.6g (reached %.6g)",
                    max_windows, t_final, t);
      throw Error(ErrorKind::schedule_stall, buf);
    }
    if (t_final - t <= len) break;
    t += len;
  }
  return m;
}

namespace {

double interior_sup(const GridFunction& g, std::size_t n_interior) {
  const auto& v = g.values();
  const std::size_t k = std::min(v.size(), n_interior + 1);
  return sup_abs(std::span<const double>(v.data(), k));
}

double seed_c1(const DiagonalHistory& seed) {
  const double cp = sup_abs(seed.z_plus[0].values()) + sup_abs(seed.u_plus[0].values());
  const double cm = sup_abs(seed.z_minus[0].values()) + sup_abs(seed.u_minus[0].values());
  return std::max(cp, cm);
}

std::string window_prefix(std::size_t m, double t0, double t1) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "window %zu [%.17g, %.17g]: ", m, t0, t1);
  return buf;
}

void append_slice(DiagonalHistory& dst, const DiagonalHistory& src, std::size_t k) {
  dst.t.push_back(src.t[k]);
  dst.z_plus.push_back(src.z_plus[k]);
  dst.z_minus.push_back(src.z_minus[k]);
  if (src.has_derivatives()) {
    dst.u_plus.push_back(src.u_plus[k]);
    dst.u_minus.push_back(src.u_minus[k]);
    dst.xi_plus.push_back(src.xi_plus[k]);
    dst.xi_minus.push_back(src.xi_minus[k]);
  }
}

}  // namespace

GlobalResult run_global(const ProblemSetup& setup, const BathymetryProfile& profile, const WindowGrid& x_grid,
                        const GridParams& params, double t_final, const ContinuationOptions& options) {
  if (!(t_final > 0.0)) throw Error(ErrorKind::config, "t_final must be positive");
  if (!(params.dt > 0.0) || !(params.dx > 0.0)) throw Error(ErrorKind::config, "grid spacings must be positive");
  if (params.min_s_nodes < 2) throw Error(ErrorKind::config, "grid.min_s_nodes must be at least 2");
  if (x_grid.x.size() != setup.x.size()) throw Error(ErrorKind::domain, "x-grid does not match the setup");
  if (options.require == Requirement::global && !setup.admissible_global)
    throw Error(ErrorKind::admissibility, "data '" + setup.name + "' violates the global admissibility conditions");
  if (options.require == Requirement::local && !setup.admissible_local)
    throw Error(ErrorKind::admissibility, "data '" + setup.name + "' violates the local admissibility conditions");
  if (options.schedule == Schedule::harmonic && setup.C_phi > 0.0)
    harmonic_window_count(setup.C_phi, setup.C_h, t_final, options.max_windows, options.min_window);

  GlobalResult out;
  auto& ledger = out.ledger;
  ledger.C_phi = setup.C_phi;
  ledger.C_h = setup.C_h;
  ledger.schedule = options.schedule;
  ledger.t_final = t_final;

  DiagonalHistory seed = make_seed(setup);
  append_slice(out.history, seed, 0);
  out.window_ends.push_back(0);
  if (options.monitor != nullptr) options.monitor->start(0.0, seed.u_plus[0].values(), seed.u_minus[0].values());

  double t = 0.0;
  bool stop = false;
  for (std::size_t m = 1; !stop; ++m) {
    const double remaining = t_final - t;
    if (!(remaining > 1e-14 * t_final)) {
      ledger.completed = true;
      break;
    }
    if (m > options.max_windows) throw Error(ErrorKind::schedule_stall, "window budget exhausted before t_final");

    const double C_win = options.schedule == Schedule::harmonic ? setup.C_phi : seed_c1(seed);
    const std::size_t m_eff = options.schedule == Schedule::harmonic ? m - 1 : 0;
    double full = std::numeric_limits<double>::infinity();
    bool harmonic = true;
    if (C_win > 0.0) {
      full = window_length(m_eff, C_win, setup.C_h);
      harmonic = harmonic_branch_binds(m_eff, C_win, setup.C_h);
      if (full < options.min_window) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "window %zu length %.3e underflows at t=%.17g", m, full, t);
        throw Error(ErrorKind::schedule_stall, buf);
      }
    }
    const bool truncated = remaining <= full;
    const double len = truncated ? remaining : full;
    const double dt = std::min(params.dt, len / static_cast<double>(params.min_s_nodes - 1));
    const WindowGrid grid = window_on(x_grid, len, dt);

    WindowBudget budget;
    budget.m = m_eff;
    budget.C_phi = C_win;
    budget.C_h = setup.C_h;
    budget.ball_radius = 15.0 * static_cast<double>(m_eff + 1) * C_win;

    LedgerEntry e;
    e.m = m;
    e.t_start = t;
    e.full_length = full;
    e.truncated = truncated;
    e.harmonic_binds = harmonic;
    e.C_phi_window = C_win;
    e.s_nodes = grid.s.size();
    e.dt = dt;
    e.ball_radius = budget.ball_radius;
    e.bound = static_cast<double>(m + 1) * setup.C_phi;
    e.naive_bound = std::pow(15.0, static_cast<double>(m)) * setup.C_phi;
    e.bound_applicable = setup.admissible_global;
    e.closure.tolerance = options.closure_tol;

    const double t0 = t;
    double last_t = t0;
    bool flagged = false;
    auto observer = [&](std::size_t n, const FixedTimeResult& r, const DerivativeField& d) {
      const double tn = t0 + grid.s[n];
      last_t = tn;
      e.max_ball = std::max(e.max_ball, d.ball_norm);
      if (options.audit_closure) {
        e.closure.merge(closure_report(r.field, &d, grid, options.closure_tol, setup.admissible_global, t0));
      }
      if (options.monitor != nullptr) {
        if (options.monitor->observe(tn, d.U_plus.row(n), d.U_minus.row(n), grid.x)) flagged = true;
      }
      if (options.on_node) options.on_node(NodeEvent{m, n, t0, tn, grid, r, d});
      ++ledger.nodes;
    };

    WindowResult w;
    try {
      w = solve_window_uv(std::move(seed), profile, grid, options.solver, budget, observer);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::jacobian_collapse && options.monitor != nullptr) {
        auto it = std::upper_bound(grid.s.begin(), grid.s.end(), last_t - t0);
        const double tc = it == grid.s.end() ? t0 + len : t0 + *it;
        options.monitor->collapse(tc, 0.0, err.what());
        ledger.stop_reason = std::string("jacobian collapse: ") + err.what();
        break;
      }
      throw Error(err.kind(), window_prefix(m, t0, t0 + len) + err.what());
    }

    const std::size_t M = grid.last();
    t = t0 + grid.s[M];
    e.T_m = t;
    e.length = len;
    const auto& H = w.history;
    e.sup_z_plus = interior_sup(H.z_plus[M], x_grid.n_interior);
    e.sup_z_minus = interior_sup(H.z_minus[M], x_grid.n_interior);
    e.sup_u_plus = interior_sup(H.u_plus[M], x_grid.n_interior);
    e.sup_u_minus = interior_sup(H.u_minus[M], x_grid.n_interior);
    e.c1_norm = std::max(e.sup_z_plus + e.sup_u_plus, e.sup_z_minus + e.sup_u_minus);
    e.bound_pass = e.c1_norm <= e.bound + 1e-6;
    ledger.max_ball = std::max(ledger.max_ball, e.max_ball);
    if (options.audit_closure) ledger.closure.merge(e.closure);

    for (std::size_t n = 1; n <= M; ++n) {
      const bool keep = n == M || (options.keep_stride > 0 && n % options.keep_stride == 0);
      if (keep) append_slice(out.history, H, n);
    }
    out.window_ends.push_back(out.history.size() - 1);

    // The terminal slice seeds the next window unchanged.
    seed = make_seed(t, grid.dx, H.z_plus[M].values(), H.z_minus[M].values(), H.u_plus[M].values(),
                     H.u_minus[M].values());
    ledger.entries.push_back(e);
    if (options.on_window) options.on_window(w, ledger.entries.back());
    if (flagged && options.stop_on_breaking) {
      ledger.stop_reason = "gradient threshold crossed";
      stop = true;
    }
  }
  if (!stop && ledger.stop_reason.empty()) ledger.completed = true;
  return out;
}

LedgerAudit ledger_audit(const ContinuationLedger& ledger, double slack) {
  LedgerAudit a;
  double prev = 0.0;
  for (const auto& e : ledger.entries) {
    LedgerAuditRow r;
    r.m = e.m;
    r.T_m = e.T_m;
    r.c1_norm = e.c1_norm;
    r.bound = e.bound;
    r.naive_bound = e.naive_bound;
    r.bound_applicable = e.bound_applicable;
    r.bound_pass = e.c1_norm <= e.bound + slack;
    const double expected = ledger.schedule == Schedule::harmonic
                                ? window_length(e.m - 1, ledger.C_phi, ledger.C_h)
                                : window_length(0, e.C_phi_window, ledger.C_h);
    const double step = e.T_m - prev;
    const double ulp = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(e.T_m));
    r.schedule_exact = e.truncated ? step <= expected + ulp : std::abs(step - expected) <= ulp;
    r.closure_pass = e.closure.pass;
    r.pass = (!r.bound_applicable || r.bound_pass) && r.schedule_exact && r.closure_pass;
    if (!r.pass && a.pass) {
      a.pass = false;
      a.first_failure = e.m;
    }
    a.rows.push_back(r);
    prev = e.T_m;
  }
  return a;
}

nlohmann::ordered_json to_json(const ContinuationLedger& ledger) {
  nlohmann::ordered_json j;
  j["schedule"] = ledger.schedule == Schedule::harmonic ? "harmonic" : "rebased";
  j["C_phi"] = ledger.C_phi;
  j["C_h"] = ledger.C_h;
  j["t_final"] = ledger.t_final;
  j["windows"] = ledger.entries.size();
  j["nodes"] = ledger.nodes;
  j["completed"] = ledger.completed;
  if (!ledger.stop_reason.empty()) j["stop_reason"] = ledger.stop_reason;
  j["max_ball_norm"] = ledger.max_ball;
  j["closure"] = to_json(ledger.closure);
  return j;
}

nlohmann::ordered_json to_json(const LedgerAudit& audit) {
  nlohmann::ordered_json j;
  j["pass"] = audit.pass;
  j["first_failure"] = audit.first_failure == 0 ? nlohmann::ordered_json(nullptr)
                                                 : nlohmann::ordered_json(audit.first_failure);
  auto& rows = j["windows"] = nlohmann::ordered_json::array();
  for (const auto& r : audit.rows) {
    rows.push_back({{"m", r.m},
                    {"T_m", r.T_m},
                    {"c1_norm", r.c1_norm},
                    {"bound", r.bound},
                    {"naive_bound", r.naive_bound},
                    {"bound_applicable", r.bound_applicable},
                    {"bound_pass", r.bound_pass},
                    {"schedule_exact", r.schedule_exact},
                    {"closure_pass", r.closure_pass},
                    {"pass", r.pass}});
  }
  return j;
}

}  // namespace swaa
