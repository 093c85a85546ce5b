#pragma once

// Column-loop driver shared by the kernels. Bodies must not throw: they
// record failures in per-column slots that the caller inspects afterwards.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>

#include "swaa/picard.hpp"

namespace swaa::detail {

template <class Body>
void for_columns(std::size_t nx, Exec exec, Body&& body) {
  const auto n = static_cast<std::ptrdiff_t>(nx);
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
}

inline double sup_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

inline double sup_abs(std::span<const double> a) {
  double d = 0.0;
  for (double v : a) d = std::max(d, std::abs(v));
  return d;
}

inline std::string node_prefix(std::size_t n, double t) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "node %zu (t=%.17g): ", n, t);
  return buf;
}

}  // namespace swaa::detail
