#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "swaa/grid.hpp"

namespace swaa {

/// h + eta at or below this value is treated as loss of hyperbolicity.
inline constexpr double kHyperbolicityFloor = 1e-10;

/// Absolute slack for the pointwise sign conditions on initial data.
inline constexpr double kSignSlack = 1e-12;

/// Bottom profile h(x) >= 0 on the half-line. Past x_extent the profile is
/// continued by the constant h(x_extent).
struct BathymetryProfile {
  enum class Kind { power_law, constant, tabulated };

  Kind kind = Kind::constant;
  double p = 1.0;      ///< exponent of h = (1 + x)^(-p)
  double depth = 1.0;  ///< value of the constant profile
  double x_extent = std::numeric_limits<double>::infinity();
  MonotoneCubic table;

  static BathymetryProfile power_law(double p, double x_extent = std::numeric_limits<double>::infinity());
  static BathymetryProfile constant(double depth, double x_extent = std::numeric_limits<double>::infinity());
  /// Monotone cubic through (x, h) pairs; x_extent is the last tabulated x.
  static BathymetryProfile tabulated(std::vector<double> x, std::vector<double> h);

  /// True when h' vanishes identically.
  bool flat() const noexcept { return kind == Kind::constant; }
};

struct BathymetryValue {
  double h;
  double dh;
  double d2h;
};

BathymetryValue eval_bathymetry(const BathymetryProfile& profile, double x);

/// Initial data given as functions of x. Riemann data and their derivatives
/// are what the solver consumes; the physical fields are kept for reporting
/// and for the physical-form admissibility conditions.
struct InitialData {
  std::string name;
  std::function<double(double)> phi_plus, phi_minus, dphi_plus, dphi_minus;
  std::function<double(double)> u0, eta0, du0, deta0;
};

/// Build Riemann data from physical fields u0, eta0 and their derivatives.
InitialData from_physical(std::string name, const BathymetryProfile& profile, std::function<double(double)> u0,
                          std::function<double(double)> eta0, std::function<double(double)> du0,
                          std::function<double(double)> deta0);

/// Build physical fields from Riemann data phi+, phi- and their derivatives.
InitialData from_riemann_data(std::string name, const BathymetryProfile& profile, std::function<double(double)> phi_plus,
                              std::function<double(double)> phi_minus, std::function<double(double)> dphi_plus,
                              std::function<double(double)> dphi_minus);

/// Initial data sampled on a uniform x-grid, with the problem constants.
struct ProblemSetup {
  std::string name;
  double dx = 0.0;
  std::vector<double> x;
  std::vector<double> phi_plus, phi_minus, dphi_plus, dphi_minus;
  std::vector<double> u0, eta0, du0, deta0;
  double C_phi = 0.0;
  double C_h = 0.0;
  bool admissible_local = false;
  bool admissible_global = false;
};

/// Samples data on x (uniform, starting at 0) and fills constants and verdicts.
ProblemSetup make_setup(const InitialData& data, const BathymetryProfile& profile, std::vector<double> x,
                        double norm_safety = 1.0);

struct RiemannPair {
  std::vector<double> plus;
  std::vector<double> minus;
};

struct PhysicalPair {
  std::vector<double> u;
  std::vector<double> eta;
};

/// phi+- = u0 +- 2 sqrt(h + eta0) at every node.
RiemannPair to_riemann(std::span<const double> x, std::span<const double> u0, std::span<const double> eta0,
                       const BathymetryProfile& profile);

/// u = (z+ + z-)/2, eta = (z+ - z-)^2/16 - h at every node.
PhysicalPair from_riemann(std::span<const double> x, std::span<const double> z_plus, std::span<const double> z_minus,
                          const BathymetryProfile& profile);

struct Speeds {
  double c_plus;
  double c_minus;
};

/// c+- = (3 z+- + z-+)/4.
Speeds characteristic_speeds(double z_plus, double z_minus) noexcept;

enum class Scope { local, global };

struct ConditionResult {
  std::string name;
  std::string form;  ///< "physical", "riemann" or "bathymetry"
  bool required = true;
  bool pass = true;
  double worst = 0.0;  ///< most adverse value of the tested quantity
  std::size_t worst_index = 0;
  double worst_x = 0.0;
};

struct AdmissibilityReport {
  Scope scope = Scope::local;
  std::vector<ConditionResult> conditions;
  double C = 0.0;  ///< min eta0 over the samples
  bool admissible_local = false;
  bool admissible_global = false;
  bool formulations_agree = true;
  std::size_t disagreement_count = 0;

  const ConditionResult* find(const std::string& name) const;
};

AdmissibilityReport check_admissibility(const ProblemSetup& setup, const BathymetryProfile& profile, Scope scope);

struct ProblemConstants {
  double C_phi;
  double C_h;
};

/// C_phi = max over +- of (sup|phi| + sup|phi'|), C_h = sup|h| + sup|h'| + sup|h''|,
/// suprema over the sample grid and the far-field value, times norm_safety.
ProblemConstants problem_constants(const ProblemSetup& setup, const BathymetryProfile& profile,
                                   double norm_safety = 1.0);

/// min(C_phi / C_h, 1 / (15 (m + 1) C_phi)).
double window_length(std::size_t m, double C_phi, double C_h);

/// True when the 1 / (15 (m + 1) C_phi) branch is the smaller one.
bool harmonic_branch_binds(std::size_t m, double C_phi, double C_h);

}  // namespace swaa
