#include "swaa/scenarios.hpp"

#include <cmath>
#include <regex>

#include "swaa/error.hpp"

namespace swaa {

namespace scenarios {

Scenario waterfall(double p, double C) {
  Scenario sc;
  sc.profile = BathymetryProfile::power_law(p);
  const auto prof = sc.profile;
  // phi+ = 0 and phi- = -4 sqrt(C + h) in closed form.
  sc.data = from_riemann_data(
      "waterfall", prof, [](double) { return 0.0; },
      [prof, C](double x) { return -4.0 * std::sqrt(C + eval_bathymetry(prof, x).h); }, [](double) { return 0.0; },
      [prof, C](double x) {
        const auto b = eval_bathymetry(prof, x);
        return -2.0 * b.dh / std::sqrt(C + b.h);
      });
  sc.data.u0 = [prof, C](double x) { return -2.0 * std::sqrt(C + eval_bathymetry(prof, x).h); };
  sc.data.eta0 = [C](double) { return C; };
  sc.data.du0 = [prof, C](double x) {
    const auto b = eval_bathymetry(prof, x);
    return -b.dh / std::sqrt(C + b.h);
  };
  sc.data.deta0 = [](double) { return 0.0; };
  return sc;
}

Scenario steady(double depth, double eta) {
  Scenario sc;
  sc.profile = BathymetryProfile::constant(depth);
  const double u = -2.0 * std::sqrt(depth + eta);
  sc.data = from_physical(
      "steady", sc.profile, [u](double) { return u; }, [eta](double) { return eta; }, [](double) { return 0.0; },
      [](double) { return 0.0; });
  sc.burgers_reduction = true;
  return sc;
}

Scenario rest() {
  Scenario sc;
  sc.profile = BathymetryProfile::constant(1.0);
  sc.data = from_physical(
      "rest", sc.profile, [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; });
  return sc;
}

Scenario burgers_linear(double c, double m, double clip) {
  Scenario sc;
  sc.profile = BathymetryProfile::constant(1.0);
  sc.data = from_riemann_data(
      "burgers-linear", sc.profile, [](double) { return 0.0; },
      [c, m, clip](double x) { return c + m * std::min(x, clip); }, [](double) { return 0.0; },
      [m, clip](double x) { return x < clip ? m : 0.0; });
  sc.burgers_reduction = true;
  return sc;
}

Scenario burgers_tanh(double center) {
  Scenario sc;
  sc.profile = BathymetryProfile::constant(1.0);
  sc.data = from_riemann_data(
      "burgers-tanh", sc.profile, [](double) { return 0.0; },
      [center](double x) { return -3.0 - std::tanh(x - center); }, [](double) { return 0.0; },
      [center](double x) {
        const double ch = std::cosh(x - center);
        return -1.0 / (ch * ch);
      });
  sc.burgers_reduction = true;
  return sc;
}

}  // namespace scenarios

Scenario preset(const std::string& name, double center) {
  static const std::regex waterfall_re(R"(waterfall-p([0-9.eE+-]+)-c([0-9.eE+-]+))");
  std::smatch m;
  if (std::regex_match(name, m, waterfall_re)) {
    Scenario sc = scenarios::waterfall(std::stod(m[1].str()), std::stod(m[2].str()));
    sc.data.name = name;
    return sc;
  }
  if (name == "waterfall") return scenarios::waterfall(1.0, 1.0);
  if (name == "steady") return scenarios::steady();
  if (name == "rest") return scenarios::rest();
  if (name == "burgers-linear") return scenarios::burgers_linear();
  if (name == "burgers-decreasing") {
    Scenario sc = scenarios::burgers_linear(-2.0, -1.0, 10.0);
    sc.data.name = name;
    return sc;
  }
  if (name == "burgers-tanh") return scenarios::burgers_tanh(center);
  throw Error(ErrorKind::config, "unknown preset '" + name + "'");
}

}  // namespace swaa
