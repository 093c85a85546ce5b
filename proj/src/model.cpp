#include "swaa/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swaa/error.hpp"

namespace swaa {

namespace {

// Slack for the derivative sign conditions; derivatives of expression data
// come from finite differences and carry ~1e-10 noise.
constexpr double kDerivativeSlack = 1e-8;

BathymetryValue eval_inside(const BathymetryProfile& profile, double x) {
  switch (profile.kind) {
    case BathymetryProfile::Kind::power_law: {
      const double p = profile.p;
      const double base = 1.0 + x;
      const double h = std::pow(base, -p);
      return {h, -p * h / base, p * (p + 1.0) * h / (base * base)};
    }
    case BathymetryProfile::Kind::constant:
      return {profile.depth, 0.0, 0.0};
    case BathymetryProfile::Kind::tabulated:
      return {profile.table(x), profile.table.derivative(x), profile.table.second_derivative(x)};
  }
  return {0.0, 0.0, 0.0};
}

std::string node_message(const char* what, std::size_t i, double x) {
  std::ostringstream os;
  os << what << " at node " << i << " (x = " << x << ")";
  return os.str();
}

}  // namespace

BathymetryProfile BathymetryProfile::power_law(double p, double x_extent) {
  BathymetryProfile b;
  b.kind = Kind::power_law;
  b.p = p;
  b.x_extent = x_extent;
  return b;
}

BathymetryProfile BathymetryProfile::constant(double depth, double x_extent) {
  BathymetryProfile b;
  b.kind = Kind::constant;
  b.depth = depth;
  b.x_extent = x_extent;
  return b;
}

BathymetryProfile BathymetryProfile::tabulated(std::vector<double> x, std::vector<double> h) {
  BathymetryProfile b;
  b.kind = Kind::tabulated;
  b.x_extent = x.empty() ? 0.0 : x.back();
  b.table = MonotoneCubic(std::move(x), std::move(h));
  return b;
}

BathymetryValue eval_bathymetry(const BathymetryProfile& profile, double x) {
  if (x > profile.x_extent) return {eval_inside(profile, profile.x_extent).h, 0.0, 0.0};
  return eval_inside(profile, x);
}

InitialData from_physical(std::string name, const BathymetryProfile& profile, std::function<double(double)> u0,
                          std::function<double(double)> eta0, std::function<double(double)> du0,
                          std::function<double(double)> deta0) {
  InitialData d;
  d.name = std::move(name);
  d.u0 = u0;
  d.eta0 = eta0;
  d.du0 = du0;
  d.deta0 = deta0;
  d.phi_plus = [=](double x) { return u0(x) + 2.0 * std::sqrt(eval_bathymetry(profile, x).h + eta0(x)); };
  d.phi_minus = [=](double x) { return u0(x) - 2.0 * std::sqrt(eval_bathymetry(profile, x).h + eta0(x)); };
  d.dphi_plus = [=](double x) {
    const auto b = eval_bathymetry(profile, x);
    return du0(x) + (b.dh + deta0(x)) / std::sqrt(b.h + eta0(x));
  };
  d.dphi_minus = [=](double x) {
    const auto b = eval_bathymetry(profile, x);
    return du0(x) - (b.dh + deta0(x)) / std::sqrt(b.h + eta0(x));
  };
  return d;
}

InitialData from_riemann_data(std::string name, const BathymetryProfile& profile, std::function<double(double)> phi_plus,
                              std::function<double(double)> phi_minus, std::function<double(double)> dphi_plus,
                              std::function<double(double)> dphi_minus) {
  InitialData d;
  d.name = std::move(name);
  d.phi_plus = phi_plus;
  d.phi_minus = phi_minus;
  d.dphi_plus = dphi_plus;
  d.dphi_minus = dphi_minus;
  d.u0 = [=](double x) { return 0.5 * (phi_plus(x) + phi_minus(x)); };
  d.eta0 = [=](double x) {
    const double w = phi_plus(x) - phi_minus(x);
    return w * w / 16.0 - eval_bathymetry(profile, x).h;
  };
  d.du0 = [=](double x) { return 0.5 * (dphi_plus(x) + dphi_minus(x)); };
  // h' + eta0' = (phi+ - phi-)(phi+' - phi-')/8
  d.deta0 = [=](double x) {
    return (phi_plus(x) - phi_minus(x)) * (dphi_plus(x) - dphi_minus(x)) / 8.0 - eval_bathymetry(profile, x).dh;
  };
  return d;
}

ProblemSetup make_setup(const InitialData& data, const BathymetryProfile& profile, std::vector<double> x,
                        double norm_safety) {
  if (x.size() < 2) throw Error(ErrorKind::config, "setup needs at least two x-nodes");
  ProblemSetup s;
  s.name = data.name;
  s.dx = x[1] - x[0];
  const std::size_t n = x.size();
  s.phi_plus.resize(n);
  s.phi_minus.resize(n);
  s.dphi_plus.resize(n);
  s.dphi_minus.resize(n);
  s.u0.resize(n);
  s.eta0.resize(n);
  s.du0.resize(n);
  s.deta0.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double h = eval_bathymetry(profile, xi).h;
    s.eta0[i] = data.eta0(xi);
    if (!(h + s.eta0[i] > kHyperbolicityFloor))
      throw Error(ErrorKind::hyperbolicity_loss, node_message("h + eta0 <= floor", i, xi));
    s.phi_plus[i] = data.phi_plus(xi);
    s.phi_minus[i] = data.phi_minus(xi);
    s.dphi_plus[i] = data.dphi_plus(xi);
    s.dphi_minus[i] = data.dphi_minus(xi);
    s.u0[i] = data.u0(xi);
    s.du0[i] = data.du0(xi);
    s.deta0[i] = data.deta0(xi);
  }
  s.x = std::move(x);
  const auto c = problem_constants(s, profile, norm_safety);
  s.C_phi = c.C_phi;
  s.C_h = c.C_h;
  const auto report = check_admissibility(s, profile, Scope::global);
  s.admissible_local = report.admissible_local;
  s.admissible_global = report.admissible_global;
  return s;
}

RiemannPair to_riemann(std::span<const double> x, std::span<const double> u0, std::span<const double> eta0,
                       const BathymetryProfile& profile) {
  RiemannPair r;
  r.plus.resize(x.size());
  r.minus.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double depth = eval_bathymetry(profile, x[i]).h + eta0[i];
    if (!(depth > kHyperbolicityFloor))
      throw Error(ErrorKind::hyperbolicity_loss, node_message("h + eta0 <= floor", i, x[i]));
    const double c = 2.0 * std::sqrt(depth);
    r.plus[i] = u0[i] + c;
    r.minus[i] = u0[i] - c;
  }
  return r;
}

PhysicalPair from_riemann(std::span<const double> x, std::span<const double> z_plus, std::span<const double> z_minus,
                          const BathymetryProfile& profile) {
  PhysicalPair p;
  p.u.resize(x.size());
  p.eta.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (z_plus[i] < z_minus[i]) throw Error(ErrorKind::ordering, node_message("z+ < z-", i, x[i]));
    const double w = z_plus[i] - z_minus[i];
    p.u[i] = 0.5 * (z_plus[i] + z_minus[i]);
    p.eta[i] = w * w / 16.0 - eval_bathymetry(profile, x[i]).h;
  }
  return p;
}

Speeds characteristic_speeds(double z_plus, double z_minus) noexcept {
  return {0.25 * (3.0 * z_plus + z_minus), 0.25 * (z_plus + 3.0 * z_minus)};
}

const ConditionResult* AdmissibilityReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

AdmissibilityReport check_admissibility(const ProblemSetup& setup, const BathymetryProfile& profile, Scope scope) {
  AdmissibilityReport rep;
  rep.scope = scope;
  const std::size_t n = setup.x.size();

  // Each condition tracks the most adverse value of a quantity that must be
  // <= limit (upper) or >= limit (lower).
  struct Tracker {
    ConditionResult r;
    bool upper;
    double limit;
    double slack;
    bool first = true;
    void visit(double v, std::size_t i, double x) {
      const bool worse = first || (upper ? v > r.worst : v < r.worst);
      if (worse) {
        r.worst = v;
        r.worst_index = i;
        r.worst_x = x;
        first = false;
      }
    }
    bool ok_at(double v) const { return upper ? v <= limit + slack : v >= limit - slack; }
    ConditionResult done() {
      r.pass = ok_at(r.worst);
      return r;
    }
  };
  auto make = [](std::string name, std::string form, bool required, bool upper, double limit, double slack) {
    Tracker t;
    t.r.name = std::move(name);
    t.r.form = std::move(form);
    t.r.required = required;
    t.upper = upper;
    t.limit = limit;
    t.slack = slack;
    return t;
  };

  auto h_nonneg = make("h_nonnegative", "bathymetry", true, false, 0.0, 0.0);
  auto h_noninc = make("h_nonincreasing", "bathymetry", true, true, 0.0, kSignSlack);
  auto hyper = make("hyperbolicity", "physical", true, false, kHyperbolicityFloor, 0.0);
  auto eta_pos = make("eta0_positive", "physical", false, false, 0.0, 0.0);
  auto u_sign = make("u0_below_minus_2c", "physical", true, true, 0.0, kSignSlack);
  auto pp_sign = make("phi_plus_nonpositive", "riemann", true, true, 0.0, kSignSlack);
  auto pm_sign = make("phi_minus_nonpositive", "riemann", true, true, 0.0, kSignSlack);
  auto h_convex = make("h_convex", "bathymetry", true, false, 0.0, kSignSlack);
  auto u_slope = make("u0_slope", "physical", true, false, 0.0, kDerivativeSlack);
  auto dpp_sign = make("dphi_plus_nonnegative", "riemann", true, false, 0.0, kDerivativeSlack);
  auto dpm_sign = make("dphi_minus_nonnegative", "riemann", true, false, 0.0, kDerivativeSlack);

  for (std::size_t i = 0; i < n; ++i) {
    const double x = setup.x[i];
    const auto b = eval_bathymetry(profile, x);
    const double depth = b.h + setup.eta0[i];
    const double c = std::sqrt(std::max(depth, 0.0));
    h_nonneg.visit(b.h, i, x);
    h_noninc.visit(b.dh, i, x);
    hyper.visit(depth, i, x);
    eta_pos.visit(setup.eta0[i], i, x);
    const double u_margin = setup.u0[i] + 2.0 * c;
    u_sign.visit(u_margin, i, x);
    pp_sign.visit(setup.phi_plus[i], i, x);
    pm_sign.visit(setup.phi_minus[i], i, x);
    h_convex.visit(b.d2h, i, x);
    const double slope_margin = c > 0.0 ? setup.du0[i] - std::abs(b.dh + setup.deta0[i]) / c : -1.0;
    u_slope.visit(slope_margin, i, x);
    dpp_sign.visit(setup.dphi_plus[i], i, x);
    dpm_sign.visit(setup.dphi_minus[i], i, x);

    const bool phys_sign = u_sign.ok_at(u_margin);
    const bool riem_sign = pp_sign.ok_at(setup.phi_plus[i]) && pm_sign.ok_at(setup.phi_minus[i]);
    bool agree = phys_sign == riem_sign;
    if (scope == Scope::global) {
      const bool phys_slope = u_slope.ok_at(slope_margin);
      const bool riem_slope = dpp_sign.ok_at(setup.dphi_plus[i]) && dpm_sign.ok_at(setup.dphi_minus[i]);
      agree = agree && phys_slope == riem_slope;
    }
    if (!agree) ++rep.disagreement_count;
  }
  rep.formulations_agree = rep.disagreement_count == 0;
  rep.C = eta_pos.r.worst;

  for (auto* t : {&h_nonneg, &h_noninc, &hyper, &eta_pos, &u_sign, &pp_sign, &pm_sign})
    rep.conditions.push_back(t->done());
  rep.admissible_local = true;
  for (const auto& c : rep.conditions)
    if (c.required && !c.pass) rep.admissible_local = false;

  // The global verdict is filled for both scopes; the extra rows are listed
  // only when the global conditions were requested.
  rep.admissible_global = rep.admissible_local;
  for (auto* t : {&h_convex, &u_slope, &dpp_sign, &dpm_sign}) {
    const auto r = t->done();
    if (r.required && !r.pass) rep.admissible_global = false;
    if (scope == Scope::global) rep.conditions.push_back(r);
  }
  return rep;
}

ProblemConstants problem_constants(const ProblemSetup& setup, const BathymetryProfile& profile, double norm_safety) {
  auto sup_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
  };
  const double cp = sup_abs(setup.phi_plus) + sup_abs(setup.dphi_plus);
  const double cm = sup_abs(setup.phi_minus) + sup_abs(setup.dphi_minus);

  double sh = 0.0, sdh = 0.0, sd2h = 0.0;
  for (double x : setup.x) {
    const auto b = eval_bathymetry(profile, x);
    sh = std::max(sh, std::abs(b.h));
    sdh = std::max(sdh, std::abs(b.dh));
    sd2h = std::max(sd2h, std::abs(b.d2h));
  }
  if (std::isfinite(profile.x_extent)) sh = std::max(sh, std::abs(eval_bathymetry(profile, profile.x_extent).h));
  return {norm_safety * std::max(cp, cm), norm_safety * (sh + sdh + sd2h)};
}

double window_length(std::size_t m, double C_phi, double C_h) {
  if (!(C_phi > 0.0)) throw Error(ErrorKind::domain, "window length undefined for C_phi = 0");
  const double harmonic = 1.0 / (15.0 * static_cast<double>(m + 1) * C_phi);
  if (!(C_h > 0.0)) return harmonic;
  return std::min(C_phi / C_h, harmonic);
}

bool harmonic_branch_binds(std::size_t m, double C_phi, double C_h) {
  if (!(C_h > 0.0)) return true;
  return 1.0 / (15.0 * static_cast<double>(m + 1) * C_phi) <= C_phi / C_h;
}

}  // namespace swaa
