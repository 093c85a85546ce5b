#include "swaa/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "swaa/continuation.hpp"
#include "swaa/error.hpp"
#include "swaa/invariants.hpp"
#include "swaa/oracle.hpp"

namespace swaa::cli {

namespace {

using nlohmann::ordered_json;

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_out(const std::filesystem::path& path) {
  File f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw Error(ErrorKind::config, "cannot write '" + path.string() + "'");
  return f;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::config, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

const char* name_of(Schedule s) { return s == Schedule::harmonic ? "harmonic" : "rebased"; }

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["source"] = c.source;
  if (!c.preset.empty()) {
    j["preset"] = c.preset;
    j["center"] = c.center;
  } else {
    j["bathymetry"] = c.bathymetry_kind;
    if (!c.u0_expr.empty()) {
      j["u0"] = c.u0_expr;
      j["eta0"] = c.eta0_expr;
    }
    if (!c.phi_path.empty()) j["phi_path"] = c.phi_path;
  }
  j["x_max"] = c.grid.x_max;
  j["dx"] = c.grid.dx;
  j["dt"] = c.grid.dt;
  j["min_s_nodes"] = c.grid.min_s_nodes;
  j["schedule"] = name_of(c.schedule);
  j["t_final"] = c.t_final;
  return j;
}

ordered_json constants_json(const ProblemSetup& s, const WindowGrid& g) {
  ordered_json j;
  j["C_phi"] = s.C_phi;
  j["C_h"] = s.C_h;
  j["admissible_local"] = s.admissible_local;
  j["admissible_global"] = s.admissible_global;
  j["x_nodes"] = g.nx();
  j["x_interior"] = g.n_interior + 1;
  j["buffer"] = g.buffer;
  return j;
}

struct Prepared {
  Problem problem;
  ProblemSetup setup;
  WindowGrid x_grid;
};

Prepared prepare(const RunConfig& c) {
  Prepared p{build_problem(c), {}, {}};
  p.setup = prepare_setup(p.problem.data, p.problem.profile, c.grid, c.t_final, p.x_grid, c.norm_safety);
  return p;
}

ContinuationOptions continuation_options(const RunConfig& c) {
  ContinuationOptions o;
  o.schedule = c.schedule;
  o.solver = c.solver;
  o.max_windows = c.max_windows;
  o.keep_stride = c.snapshot_stride;
  return o;
}

void write_snapshots(const std::filesystem::path& path, const DiagonalHistory& h, const WindowGrid& g,
                     const BathymetryProfile& profile) {
  File f = open_out(path);
  std::fputs("t,x,z_plus,z_minus,u,eta,du_plus,du_minus,xi_plus,xi_minus,c_plus,c_minus\n", f.get());
  const bool derivs = h.has_derivatives();
  for (std::size_t k = 0; k < h.size(); ++k) {
    const auto& zp = h.z_plus[k].values();
    const auto& zm = h.z_minus[k].values();
    for (std::size_t i = 0; i <= g.n_interior; ++i) {
      const double x = g.x[i];
      const double u = 0.5 * (zp[i] + zm[i]);
      const double eta = (zp[i] - zm[i]) * (zp[i] - zm[i]) / 16.0 - eval_bathymetry(profile, x).h;
      const double up = derivs ? h.u_plus[k].values()[i] : NAN;
      const double um = derivs ? h.u_minus[k].values()[i] : NAN;
      const double xp = k < h.xi_plus.size() ? h.xi_plus[k][i] : NAN;
      const double xm = k < h.xi_minus.size() ? h.xi_minus[k][i] : NAN;
      const Speeds c = characteristic_speeds(zp[i], zm[i]);
      std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", h.t[k], x,
                   zp[i], zm[i], u, eta, up, um, xp, xm, c.c_plus, c.c_minus);
    }
  }
}

void write_ledger(const std::filesystem::path& path, const ContinuationLedger& ledger) {
  File f = open_out(path);
  std::fputs(
      "m,t_start,T_m,window_len,full_length,truncated,harmonic_binds,C_phi_window,s_nodes,dt,sup_z_plus,sup_z_minus,"
      "sup_u_plus,sup_u_minus,c1_norm,bound,naive_bound,bound_applicable,bound_pass,ball_radius,max_ball,"
      "closure_pass\n",
      f.get());
  for (const LedgerEntry& e : ledger.entries) {
    std::fprintf(f.get(),
                 "%zu,%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,"
                 "%.17g,%.17g,%d\n",
                 e.m, e.t_start, e.T_m, e.length, e.full_length, e.truncated, e.harmonic_binds, e.C_phi_window,
                 e.s_nodes, e.dt, e.sup_z_plus, e.sup_z_minus, e.sup_u_plus, e.sup_u_minus, e.c1_norm, e.bound,
                 e.naive_bound, e.bound_applicable, e.bound_pass, e.ball_radius, e.max_ball, e.closure.pass);
  }
}

int check(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
  const Prepared p = prepare(c);
  const AdmissibilityReport report = check_admissibility(p.setup, p.problem.profile, Scope::global);
  ordered_json j;
  j["command"] = "check";
  j["config"] = config_json(c);
  j["constants"] = constants_json(p.setup, p.x_grid);
  j["admissibility"] = to_json(report);
  write_json(out / "report.json", j);
  log << "check: local " << (report.admissible_local ? "pass" : "fail") << ", global "
      << (report.admissible_global ? "pass" : "fail") << '\n';
  return report.admissible_global ? 0 : exit_code(ErrorKind::admissibility);
}

struct Comparison {
  std::string oracle;
  std::vector<double> t, err_plus, err_minus;
  double sup() const {
    double s = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) s = std::max({s, err_plus[k], err_minus[k]});
    return s;
  }
};

Comparison compare_upwind(const RunConfig& c, const Prepared& p, const DiagonalHistory& h) {
  GridParams fine = c.grid;
  fine.dx = c.oracle_dx;
  fine.dt = c.oracle_dx;
  WindowGrid fine_grid;
  const ProblemSetup fs = prepare_setup(p.problem.data, p.problem.profile, fine, c.t_final, fine_grid, c.norm_safety);
  UpwindOptions uo;
  uo.exec = c.solver.exec;
  for (std::size_t k = 0; k < h.size(); ++k) uo.snapshot_times.push_back(h.t[k]);
  const UpwindResult up = upwind_reference(fs, p.problem.profile, c.t_final, uo);

  Comparison cmp{"upwind", {}, {}, {}};
  for (std::size_t k = 0; k < h.size(); ++k) {
    std::size_t q = 0;
    for (std::size_t r = 1; r < up.t.size(); ++r)
      if (std::abs(up.t[r] - h.t[k]) < std::abs(up.t[q] - h.t[k])) q = r;
    const GridFunction fp(0.0, fs.dx, up.z_plus[q]);
    const GridFunction fm(0.0, fs.dx, up.z_minus[q]);
    double ep = 0.0, em = 0.0;
    for (std::size_t i = 0; i <= p.x_grid.n_interior; ++i) {
      const double x = p.x_grid.x[i];
      ep = std::max(ep, std::abs(h.z_plus[k].values()[i] - fp(x)));
      em = std::max(em, std::abs(h.z_minus[k].values()[i] - fm(x)));
    }
    cmp.t.push_back(h.t[k]);
    cmp.err_plus.push_back(ep);
    cmp.err_minus.push_back(em);
  }
  return cmp;
}

Comparison compare_burgers(const Prepared& p, const DiagonalHistory& h) {
  double phi_sup = 0.0;
  for (double v : p.setup.phi_minus) phi_sup = std::max(phi_sup, std::abs(v));
  Comparison cmp{"burgers_exact", {}, {}, {}};
  for (std::size_t k = 0; k < h.size(); ++k) {
    double ep = 0.0, em = 0.0;
    for (std::size_t i = 0; i <= p.x_grid.n_interior; ++i) {
      const double x = p.x_grid.x[i];
      ep = std::max(ep, std::abs(h.z_plus[k].values()[i]));
      em = std::max(em, std::abs(h.z_minus[k].values()[i] - burgers_exact(p.problem.data.phi_minus, h.t[k], x, phi_sup)));
    }
    cmp.t.push_back(h.t[k]);
    cmp.err_plus.push_back(ep);
    cmp.err_minus.push_back(em);
  }
  return cmp;
}

bool burgers_applies(const Prepared& p) {
  if (!p.problem.profile.flat()) return false;
  return std::all_of(p.setup.phi_plus.begin(), p.setup.phi_plus.end(), [](double v) { return v == 0.0; });
}

int solve(const RunConfig& c, bool with_oracles, const std::filesystem::path& out, std::ostream& log) {
  const Prepared p = prepare(c);
  const AdmissibilityReport adm = check_admissibility(p.setup, p.problem.profile, Scope::global);
  ordered_json j;
  j["command"] = with_oracles ? "compare" : "solve";
  j["config"] = config_json(c);
  j["constants"] = constants_json(p.setup, p.x_grid);
  j["admissibility"] = to_json(adm);
  if (!p.setup.admissible_global) {
    write_json(out / "report.json", j);
    log << "solve: data fail the global admissibility conditions\n";
    return exit_code(ErrorKind::admissibility);
  }

  const GlobalResult r = run_global(p.setup, p.problem.profile, p.x_grid, c.grid, c.t_final, continuation_options(c));
  const LedgerAudit audit = ledger_audit(r.ledger);
  const ResidualReport residual = residual_report(r.history, p.problem.profile, p.x_grid.x, c.grid.x_max);

  write_snapshots(out / "snapshots.csv", r.history, p.x_grid, p.problem.profile);
  write_ledger(out / "ledger.csv", r.ledger);

  j["ledger"] = to_json(r.ledger);
  j["audit"] = to_json(audit);
  j["closure"] = to_json(r.ledger.closure);
  j["residual"] = to_json(residual);
  j["max_ball"] = r.ledger.max_ball;

  if (with_oracles) {
    std::vector<Comparison> all;
    all.push_back(compare_upwind(c, p, r.history));
    if (p.problem.burgers_reduction || burgers_applies(p)) all.push_back(compare_burgers(p, r.history));
    File f = open_out(out / "errors.csv");
    std::fputs("oracle,t,sup_err_plus,sup_err_minus\n", f.get());
    ordered_json cj = ordered_json::array();
    for (const Comparison& cmp : all) {
      for (std::size_t k = 0; k < cmp.t.size(); ++k)
        std::fprintf(f.get(), "%s,%.17g,%.17g,%.17g\n", cmp.oracle.c_str(), cmp.t[k], cmp.err_plus[k],
                     cmp.err_minus[k]);
      ordered_json e;
      e["oracle"] = cmp.oracle;
      e["sup_error"] = cmp.sup();
      e["final_error"] = cmp.t.empty() ? 0.0 : std::max(cmp.err_plus.back(), cmp.err_minus.back());
      cj.push_back(e);
      log << "compare: " << cmp.oracle << " sup error " << cmp.sup() << '\n';
    }
    j["comparison"] = cj;
  }
  write_json(out / "report.json", j);

  log << "solve: " << r.ledger.entries.size() << " windows to t = " << c.t_final << ", closure "
      << (r.ledger.closure.pass ? "pass" : "fail") << ", audit " << (audit.pass ? "pass" : "fail") << '\n';
  if (!r.ledger.closure.pass || !audit.pass) return exit_code(ErrorKind::invariant_violation);
  return 0;
}

int breaking(const RunConfig& c, const std::filesystem::path& out, std::ostream& log) {
  const Prepared p = prepare(c);
  BreakingMonitor monitor(c.breaking_threshold);
  ContinuationOptions o = continuation_options(c);
  o.schedule = Schedule::rebased;
  o.require = Requirement::none;
  o.monitor = &monitor;
  o.audit_closure = false;
  o.keep_stride = 0;

  ordered_json j;
  j["command"] = "breaking";
  j["config"] = config_json(c);
  j["constants"] = constants_json(p.setup, p.x_grid);
  int code = 0;
  try {
    const GlobalResult r = run_global(p.setup, p.problem.profile, p.x_grid, c.grid, c.t_final, o);
    j["windows"] = r.ledger.entries.size();
    j["completed"] = r.ledger.completed;
    j["stop_reason"] = r.ledger.stop_reason;
  } catch (const Error& e) {
    // A solver failure after the threshold crossing does not undo the verdict.
    if (!monitor.verdict().broken) code = exit_code(e.kind());
    j["stop_reason"] = std::string(to_string(e.kind())) + ": " + e.what();
  }
  j["analytic_breaking_time"] = breaking_time(p.setup.dphi_minus);
  j["verdict"] = to_json(monitor.verdict());
  write_json(out / "breaking.json", j);

  File f = open_out(out / "breaking_series.csv");
  std::fputs("t,sup_du\n", f.get());
  for (std::size_t k = 0; k < monitor.times().size(); ++k)
    std::fprintf(f.get(), "%.17g,%.17g\n", monitor.times()[k], monitor.sups()[k]);

  const BreakingVerdict& v = monitor.verdict();
  if (v.broken) log << "breaking: " << v.cause << " at t* = " << v.t_star << ", x = " << v.x_star << '\n';
  else log << "breaking: none up to t = " << v.last_t << '\n';
  return code;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  if (name == "check") return Command::check;
  if (name == "solve") return Command::solve;
  if (name == "compare") return Command::compare;
  if (name == "breaking") return Command::breaking;
  return std::nullopt;
}

int run(const RunConfig& config, Command command, const std::string& out_dir, std::ostream& log) {
  const std::filesystem::path out(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::config, "cannot create output directory '" + out_dir + "': " + ec.message());
  switch (command) {
    case Command::check: return check(config, out, log);
    case Command::solve: return solve(config, false, out, log);
    case Command::compare: return solve(config, true, out, log);
    case Command::breaking: return breaking(config, out, log);
  }
  return 1;
}

}  // namespace swaa::cli
