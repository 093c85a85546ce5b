#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "swaa/derivatives.hpp"
#include "swaa/grid.hpp"
#include "swaa/model.hpp"
#include "swaa/picard.hpp"

namespace swaa {

struct NodeLocation {
  std::size_t n = 0;  ///< target node within its window
  std::size_t j = 0;  ///< s-node
  std::size_t i = 0;  ///< x-node
  double t = 0.0;     ///< absolute target time
  double s = 0.0;     ///< absolute s
  double x = 0.0;
};

struct ConstraintResult {
  std::string name;
  bool applicable = true;  ///< false: measured but not part of the verdict
  double worst = 0.0;      ///< largest violation amount (0 when satisfied everywhere)
  NodeLocation worst_at;
  std::size_t violations = 0;  ///< nodes beyond tolerance
  bool has_first = false;
  NodeLocation first_at;  ///< first violating node in scan order
  bool pass = true;
};

/// Sign closure of the characteristic and derivative fields:
/// eta+- >= x, Z+- <= 0, Y+- <= 0, U+- >= 0, V+- >= 0, 0 < xi+- <= 1.
struct ClosureReport {
  double tolerance = 1e-9;
  bool global_conditions = true;  ///< U, V constraints count toward the verdict
  std::vector<ConstraintResult> constraints;
  std::size_t nodes_audited = 0;
  bool pass = true;

  const ConstraintResult* find(const std::string& name) const;
  /// Combine with a report of the same layout (worst and first are kept).
  void merge(const ClosureReport& other);
};

/// `d` may be null, in which case only the characteristic constraints are reported.
/// `t0` shifts s and t to absolute time.
ClosureReport closure_report(const CharacteristicField& field, const DerivativeField* d, const WindowGrid& grid,
                             double tolerance = 1e-9, bool global_conditions = true, double t0 = 0.0);

struct ResidualComponent {
  std::string name;
  double sup = 0.0;
  double t = 0.0;
  double x = 0.0;
};

/// Sup over interior nodes of |d_t z+- + c+- d_x z+- - h'| by centered differences.
struct ResidualReport {
  std::vector<ResidualComponent> components;  ///< "plus", "minus"
  std::size_t time_nodes = 0;
  std::size_t x_nodes = 0;
  double sup() const;
};

/// x_limit bounds the audited x-nodes (default: all but the last).
ResidualReport residual_report(const DiagonalHistory& history, const BathymetryProfile& profile,
                               std::span<const double> x, double x_limit = std::numeric_limits<double>::infinity());

struct BreakingVerdict {
  bool broken = false;
  std::string cause = "none";  ///< "none", "gradient", "jacobian-collapse"
  double t_star = std::numeric_limits<double>::infinity();
  double x_star = 0.0;
  double t_gradient = std::numeric_limits<double>::infinity();
  double t_collapse = std::numeric_limits<double>::infinity();
  double initial_sup = 0.0;
  double threshold = 0.0;
  double factor = 100.0;
  double last_t = 0.0;
  double last_sup = 0.0;
  std::string detail;
};

/// Watches sup|d_x z+-| over time and flags breaking when it passes
/// factor x (initial sup), or when a Jacobian collapse is reported.
class BreakingMonitor {
 public:
  explicit BreakingMonitor(double factor = 100.0, double floor = 1e-8) : factor_(factor), floor_(floor) {}

  void start(double t0, std::span<const double> u_plus, std::span<const double> u_minus);
  /// Returns true on the observation that first crosses the threshold.
  bool observe(double t, std::span<const double> u_plus, std::span<const double> u_minus,
               std::span<const double> x);
  void collapse(double t, double x, const std::string& detail);

  const BreakingVerdict& verdict() const noexcept { return v_; }
  bool started() const noexcept { return started_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& sups() const noexcept { return sups_; }

 private:
  double factor_;
  double floor_;
  bool started_ = false;
  BreakingVerdict v_;
  std::vector<double> times_, sups_;
};

/// Offline monitor over a history carrying u+-; `n_x` limits the audited x-nodes (0: all).
BreakingVerdict breaking_monitor(const DiagonalHistory& history, std::span<const double> x, double factor = 100.0,
                                 std::size_t n_x = 0);

nlohmann::ordered_json to_json(const ClosureReport& r);
nlohmann::ordered_json to_json(const ResidualReport& r);
nlohmann::ordered_json to_json(const BreakingVerdict& v);
nlohmann::ordered_json to_json(const AdmissibilityReport& r);

}  // namespace swaa
