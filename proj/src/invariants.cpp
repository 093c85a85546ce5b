#include "swaa/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "columns.hpp"
#include "swaa/error.hpp"

namespace swaa {

const ConstraintResult* ClosureReport::find(const std::string& name) const {
  for (const auto& c : constraints)
    if (c.name == name) return &c;
  return nullptr;
}

void ClosureReport::merge(const ClosureReport& other) {
  if (constraints.empty()) {
    *this = other;
    return;
  }
  for (std::size_t k = 0; k < constraints.size() && k < other.constraints.size(); ++k) {
    auto& a = constraints[k];
    const auto& b = other.constraints[k];
    if (b.worst > a.worst) {
      a.worst = b.worst;
      a.worst_at = b.worst_at;
    }
    if (!a.has_first && b.has_first) {
      a.has_first = true;
      a.first_at = b.first_at;
    }
    a.violations += b.violations;
    a.pass = a.pass && b.pass;
  }
  nodes_audited += other.nodes_audited;
  pass = pass && other.pass;
}

namespace {

class Auditor {
 public:
  Auditor(ClosureReport& r, const WindowGrid& grid, std::size_t n, double t0)
      : r_(r), grid_(grid), n_(n), t0_(t0) {}

  // violation(j, i) >= 0 is the amount by which the constraint fails.
  template <class F>
  void run(const std::string& name, bool applicable, std::size_t nx, F&& violation) {
    ConstraintResult c;
    c.name = name;
    c.applicable = applicable;
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j <= n_; ++j) {
        const double v = violation(j, i);
        if (v > c.worst || std::isnan(v)) {
          c.worst = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
          c.worst_at = at(j, i);
        }
        if (!(v <= r_.tolerance)) {
          ++c.violations;
          if (!c.has_first) {
            c.has_first = true;
            c.first_at = at(j, i);
          }
        }
      }
    }
    c.pass = c.violations == 0;
    if (applicable && !c.pass) r_.pass = false;
    r_.constraints.push_back(std::move(c));
  }

 private:
  NodeLocation at(std::size_t j, std::size_t i) const {
    return {n_, j, i, t0_ + grid_.s[n_], t0_ + grid_.s[j], grid_.x[i]};
  }

  ClosureReport& r_;
  const WindowGrid& grid_;
  std::size_t n_;
  double t0_;
};

double xi_violation(double xi) { return xi > 0.0 ? std::max(0.0, xi - 1.0) : 1.0 - xi; }

}  // namespace

ClosureReport closure_report(const CharacteristicField& f, const DerivativeField* d, const WindowGrid& grid,
                             double tolerance, bool global_conditions, double t0) {
  ClosureReport r;
  r.tolerance = tolerance;
  r.global_conditions = global_conditions;
  const std::size_t nx = f.Z_plus.nx();
  Auditor a(r, grid, f.n, t0);
  a.run("eta_plus>=x", true, nx, [&](auto j, auto i) { return std::max(0.0, grid.x[i] - f.eta_plus(j, i)); });
  a.run("eta_minus>=x", true, nx, [&](auto j, auto i) { return std::max(0.0, grid.x[i] - f.eta_minus(j, i)); });
  a.run("Z_plus<=0", true, nx, [&](auto j, auto i) { return std::max(0.0, f.Z_plus(j, i)); });
  a.run("Z_minus<=0", true, nx, [&](auto j, auto i) { return std::max(0.0, f.Z_minus(j, i)); });
  a.run("Y_plus<=0", true, nx, [&](auto j, auto i) { return std::max(0.0, f.Y_plus(j, i)); });
  a.run("Y_minus<=0", true, nx, [&](auto j, auto i) { return std::max(0.0, f.Y_minus(j, i)); });
  if (d != nullptr) {
    const bool g = global_conditions;
    a.run("U_plus>=0", g, nx, [&](auto j, auto i) { return std::max(0.0, -d->U_plus(j, i)); });
    a.run("U_minus>=0", g, nx, [&](auto j, auto i) { return std::max(0.0, -d->U_minus(j, i)); });
    a.run("V_plus>=0", g, nx, [&](auto j, auto i) { return std::max(0.0, -d->V_plus(j, i)); });
    a.run("V_minus>=0", g, nx, [&](auto j, auto i) { return std::max(0.0, -d->V_minus(j, i)); });
    a.run("xi_plus_in_(0,1]", true, nx, [&](auto j, auto i) { return xi_violation(d->xi_plus(j, i)); });
    a.run("xi_minus_in_(0,1]", true, nx, [&](auto j, auto i) { return xi_violation(d->xi_minus(j, i)); });
  }
  r.nodes_audited = nx * (f.n + 1);
  return r;
}

double ResidualReport::sup() const {
  double m = 0.0;
  for (const auto& c : components) m = std::max(m, c.sup);
  return m;
}

ResidualReport residual_report(const DiagonalHistory& history, const BathymetryProfile& profile,
                               std::span<const double> x, double x_limit) {
  ResidualReport r;
  r.components = {{"plus"}, {"minus"}};
  const std::size_t K = history.size();
  if (K < 3) throw Error(ErrorKind::domain, "residual_report needs at least three time nodes");
  const std::size_t nx = x.size();
  std::size_t i_hi = nx - 1;
  while (i_hi > 1 && x[i_hi - 1] > x_limit) --i_hi;
  r.time_nodes = K - 2;
  r.x_nodes = i_hi > 1 ? i_hi - 1 : 0;

  for (std::size_t k = 1; k + 1 < K; ++k) {
    const auto& zp = history.z_plus[k].values();
    const auto& zm = history.z_minus[k].values();
    const auto& zp0 = history.z_plus[k - 1].values();
    const auto& zp1 = history.z_plus[k + 1].values();
    const auto& zm0 = history.z_minus[k - 1].values();
    const auto& zm1 = history.z_minus[k + 1].values();
    // Three-point first derivative on possibly unequal steps.
    const double h0 = history.t[k] - history.t[k - 1];
    const double h1 = history.t[k + 1] - history.t[k];
    const double a = -h1 / (h0 * (h0 + h1));
    const double b = (h1 - h0) / (h0 * h1);
    const double c = h0 / (h1 * (h0 + h1));
    for (std::size_t i = 1; i < i_hi; ++i) {
      const double dxx = x[i + 1] - x[i - 1];
      const double dh = eval_bathymetry(profile, x[i]).dh;
      const auto sp = characteristic_speeds(zp[i], zm[i]);
      const double rp = a * zp0[i] + b * zp[i] + c * zp1[i] + sp.c_plus * (zp[i + 1] - zp[i - 1]) / dxx - dh;
      const double rm = a * zm0[i] + b * zm[i] + c * zm1[i] + sp.c_minus * (zm[i + 1] - zm[i - 1]) / dxx - dh;
      if (std::abs(rp) > r.components[0].sup) r.components[0] = {"plus", std::abs(rp), history.t[k], x[i]};
      if (std::abs(rm) > r.components[1].sup) r.components[1] = {"minus", std::abs(rm), history.t[k], x[i]};
    }
  }
  return r;
}

namespace {

struct SupAt {
  double v = 0.0;
  std::size_t i = 0;
};

SupAt sup_at(std::span<const double> a, std::span<const double> b) {
  SupAt s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m = std::max(std::abs(a[i]), std::abs(b[i]));
    if (m > s.v) s = {m, i};
  }
  return s;
}

}  // namespace

void BreakingMonitor::start(double t0, std::span<const double> u_plus, std::span<const double> u_minus) {
  started_ = true;
  v_ = BreakingVerdict{};
  v_.factor = factor_;
  v_.initial_sup = sup_at(u_plus, u_minus).v;
  v_.threshold = factor_ * std::max(v_.initial_sup, floor_);
  v_.last_t = t0;
  v_.last_sup = v_.initial_sup;
  times_ = {t0};
  sups_ = {v_.initial_sup};
}

bool BreakingMonitor::observe(double t, std::span<const double> u_plus, std::span<const double> u_minus,
                              std::span<const double> x) {
  if (!started_) throw Error(ErrorKind::domain, "BreakingMonitor::observe before start");
  const SupAt s = sup_at(u_plus, u_minus);
  v_.last_t = t;
  v_.last_sup = s.v;
  times_.push_back(t);
  sups_.push_back(s.v);
  if (s.v > v_.threshold && !std::isfinite(v_.t_gradient)) {
    v_.t_gradient = t;
    if (t < v_.t_star) {
      v_.broken = true;
      v_.cause = "gradient";
      v_.t_star = t;
      v_.x_star = x.empty() ? 0.0 : x[s.i];
    }
    return true;
  }
  return false;
}

void BreakingMonitor::collapse(double t, double x, const std::string& detail) {
  if (std::isfinite(v_.t_collapse)) return;
  v_.t_collapse = t;
  v_.detail = detail;
  if (t < v_.t_star) {
    v_.broken = true;
    v_.cause = "jacobian-collapse";
    v_.t_star = t;
    v_.x_star = x;
  }
}

BreakingVerdict breaking_monitor(const DiagonalHistory& history, std::span<const double> x, double factor,
                                 std::size_t n_x) {
  if (history.u_plus.empty()) throw Error(ErrorKind::domain, "breaking_monitor: history carries no derivatives");
  auto clip = [&](const GridFunction& g) {
    const std::span<const double> v = g.values();
    return n_x > 0 && n_x < v.size() ? v.first(n_x) : v;
  };
  const auto xs = n_x > 0 && n_x < x.size() ? x.first(n_x) : x;
  BreakingMonitor m(factor);
  m.start(history.t.front(), clip(history.u_plus.front()), clip(history.u_minus.front()));
  for (std::size_t k = 1; k < history.u_plus.size(); ++k) {
    m.observe(history.t[k], clip(history.u_plus[k]), clip(history.u_minus[k]), xs);
    for (double xi : history.xi_plus[k]) {
      if (!(xi > 0.0)) m.collapse(history.t[k], 0.0, "xi+ <= 0 in history");
    }
    for (double xi : history.xi_minus[k]) {
      if (!(xi > 0.0)) m.collapse(history.t[k], 0.0, "xi- <= 0 in history");
    }
  }
  return m.verdict();
}

namespace {

nlohmann::ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json to_json(const NodeLocation& l) {
  return {{"n", l.n}, {"j", l.j}, {"i", l.i}, {"t", l.t}, {"s", l.s}, {"x", l.x}};
}

}  // namespace

nlohmann::ordered_json to_json(const ClosureReport& r) {
  nlohmann::ordered_json j;
  j["pass"] = r.pass;
  j["tolerance"] = r.tolerance;
  j["global_conditions"] = r.global_conditions;
  j["nodes_audited"] = r.nodes_audited;
  auto& cs = j["constraints"] = nlohmann::ordered_json::array();
  for (const auto& c : r.constraints) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["applicable"] = c.applicable;
    e["pass"] = c.pass;
    e["worst_violation"] = finite_or_null(c.worst);
    e["worst_at"] = to_json(c.worst_at);
    e["violations"] = c.violations;
    e["first_violation"] = c.has_first ? to_json(c.first_at) : nlohmann::ordered_json(nullptr);
    cs.push_back(std::move(e));
  }
  return j;
}

nlohmann::ordered_json to_json(const ResidualReport& r) {
  nlohmann::ordered_json j;
  j["sup"] = r.sup();
  j["time_nodes"] = r.time_nodes;
  j["x_nodes"] = r.x_nodes;
  auto& cs = j["components"] = nlohmann::ordered_json::array();
  for (const auto& c : r.components) cs.push_back({{"name", c.name}, {"sup", c.sup}, {"t", c.t}, {"x", c.x}});
  return j;
}

nlohmann::ordered_json to_json(const BreakingVerdict& v) {
  nlohmann::ordered_json j;
  j["broken"] = v.broken;
  j["cause"] = v.cause;
  j["t_star"] = finite_or_null(v.t_star);
  j["x_star"] = v.broken ? nlohmann::ordered_json(v.x_star) : nlohmann::ordered_json(nullptr);
  j["t_gradient"] = finite_or_null(v.t_gradient);
  j["t_collapse"] = finite_or_null(v.t_collapse);
  j["initial_sup"] = v.initial_sup;
  j["threshold_factor"] = v.factor;
  j["threshold"] = v.threshold;
  j["last_t"] = v.last_t;
  j["last_sup"] = v.last_sup;
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

nlohmann::ordered_json to_json(const AdmissibilityReport& r) {
  nlohmann::ordered_json j;
  j["scope"] = r.scope == Scope::local ? "local" : "global";
  j["admissible_local"] = r.admissible_local;
  j["admissible_global"] = r.admissible_global;
  j["C"] = r.C;
  j["formulations_agree"] = r.formulations_agree;
  j["disagreement_count"] = r.disagreement_count;
  auto& cs = j["conditions"] = nlohmann::ordered_json::array();
  for (const auto& c : r.conditions) {
    cs.push_back({{"name", c.name},
                  {"form", c.form},
                  {"required", c.required},
                  {"pass", c.pass},
                  {"worst", c.worst},
                  {"worst_index", c.worst_index},
                  {"worst_x", c.worst_x}});
  }
  return j;
}

}  // namespace swaa
