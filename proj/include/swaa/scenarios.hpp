#pragma once

#include <string>

#include "swaa/model.hpp"

namespace swaa {

/// A bathymetry profile with matching initial data.
struct Scenario {
  BathymetryProfile profile;
  InitialData data;
  /// h' == 0 and z+ == 0: z- obeys the inviscid Burgers equation dz/dt + (3/4) z dz/dx = 0.
  bool burgers_reduction = false;
};

namespace scenarios {

/// h = (1 + x)^(-p), eta0 = C, u0 = -2 sqrt(C + h).
Scenario waterfall(double p, double C);

/// h = depth, eta0 = eta, u0 = -2 sqrt(depth + eta): constant in time.
Scenario steady(double depth = 1.0, double eta = 1.0);

/// h = 1, u0 = 0, eta0 = 0 (violates the sign condition on u0).
Scenario rest();

/// h = 1, phi+ = 0, phi- = c + m min(x, clip).
Scenario burgers_linear(double c = -2.0, double m = 0.1, double clip = 10.0);

/// h = 1, phi+ = 0, phi- = -3 - tanh(x - center).
Scenario burgers_tanh(double center = 0.0);

}  // namespace scenarios

/// Resolves names such as "waterfall-p1-c1", "steady", "rest",
/// "burgers-linear", "burgers-decreasing", "burgers-tanh".
/// `center` positions the tanh front for "burgers-tanh".
Scenario preset(const std::string& name, double center = 5.0);

}  // namespace swaa
