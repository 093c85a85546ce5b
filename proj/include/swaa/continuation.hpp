#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swaa/derivatives.hpp"
#include "swaa/grid.hpp"
#include "swaa/invariants.hpp"
#include "swaa/model.hpp"
#include "swaa/picard.hpp"

namespace swaa {

/// harmonic: window m (1-based) has length window_length(m - 1, C_phi, C_h)
/// with C_phi from the original data. rebased: every window uses
/// window_length(0, C, C_h) with C the C^1 norm of its own seed slice.
enum class Schedule { harmonic, rebased };

/// Which admissibility verdict run_global demands of its data.
enum class Requirement { global, local, none };

struct GridParams {
  double x_max = 10.0;
  double dx = 0.01;
  double dt = 0.01;
  std::size_t min_s_nodes = 8;
};

struct NodeEvent {
  std::size_t m;  ///< window index, 1-based
  std::size_t n;  ///< node within the window
  double t0;      ///< window start time
  double t;       ///< absolute node time
  const WindowGrid& grid;
  const FixedTimeResult& result;
  const DerivativeField& derivatives;
};

struct LedgerEntry {
  std::size_t m = 0;
  double t_start = 0.0;
  double T_m = 0.0;            ///< cumulative end time
  double length = 0.0;         ///< T_m - t_start
  double full_length = 0.0;    ///< schedule length before truncation at t_final
  bool truncated = false;
  bool harmonic_binds = true;  ///< which branch of the min set full_length
  double C_phi_window = 0.0;   ///< constant that set the length
  std::size_t s_nodes = 0;
  double dt = 0.0;
  double sup_z_plus = 0.0, sup_z_minus = 0.0;
  double sup_u_plus = 0.0, sup_u_minus = 0.0;
  double c1_norm = 0.0;        ///< max over +- of sup|z| + sup|d_x z| at T_m
  double bound = 0.0;          ///< (m + 1) C_phi
  double naive_bound = 0.0;    ///< 15^m C_phi
  bool bound_applicable = true;
  bool bound_pass = true;
  double ball_radius = 0.0;
  double max_ball = 0.0;       ///< largest sup|U+| + sup|U-| seen in the window
  ClosureReport closure;
};

struct ContinuationLedger {
  double C_phi = 0.0;
  double C_h = 0.0;
  Schedule schedule = Schedule::harmonic;
  double t_final = 0.0;
  std::vector<LedgerEntry> entries;
  ClosureReport closure;  ///< merged over all windows
  double max_ball = 0.0;
  std::size_t nodes = 0;
  bool completed = false;  ///< reached t_final
  std::string stop_reason;
};

struct ContinuationOptions {
  Schedule schedule = Schedule::harmonic;
  Requirement require = Requirement::global;
  SolverOptions solver;
  std::size_t max_windows = 100000;
  double min_window = 1e-12;
  bool audit_closure = true;
  double closure_tol = 1e-9;
  /// Keep every k-th node of each window in the returned history (window ends always kept); 0 keeps ends only.
  std::size_t keep_stride = 1;
  /// Observes u+- at every node; Jacobian collapse and threshold crossings stop the run instead of raising.
  BreakingMonitor* monitor = nullptr;
  bool stop_on_breaking = true;
  std::function<void(const NodeEvent&)> on_node;
  std::function<void(const WindowResult&, const LedgerEntry&)> on_window;
};

struct GlobalResult {
  ContinuationLedger ledger;
  DiagonalHistory history;
  std::vector<std::size_t> window_ends;  ///< history index of each T_m
};

/// Samples data on [0, x_max] plus a buffer wide enough for characteristics
/// entering from the right during [0, t_final]. The x-grid is returned in x_grid.
ProblemSetup prepare_setup(const InitialData& data, const BathymetryProfile& profile, const GridParams& params,
                           double t_final, WindowGrid& x_grid, double norm_safety = 1.0);

/// |c+-| <= max |z+-| <= sup|phi+-| + t sup|h'|; C_h stands in for sup|h'|.
double speed_bound(double sup_phi, double C_h, double t_final);

/// Number of harmonic-schedule windows needed to reach t_final; raises schedule_stall past max_windows.
std::size_t harmonic_window_count(double C_phi, double C_h, double t_final, std::size_t max_windows,
                                  double min_window = 1e-12);

GlobalResult run_global(const ProblemSetup& setup, const BathymetryProfile& profile, const WindowGrid& x_grid,
                        const GridParams& params, double t_final, const ContinuationOptions& options = {});

struct LedgerAuditRow {
  std::size_t m = 0;
  double T_m = 0.0;
  double c1_norm = 0.0;
  double bound = 0.0;
  double naive_bound = 0.0;
  bool bound_applicable = true;
  bool bound_pass = true;
  bool schedule_exact = true;
  bool closure_pass = true;
  bool pass = true;
};

struct LedgerAudit {
  std::vector<LedgerAuditRow> rows;
  bool pass = true;
  std::size_t first_failure = 0;  ///< window index of the first failing row (0: none)
};

/// Re-checks bounds, schedule and closure for every window. `slack` is added to the bounds.
LedgerAudit ledger_audit(const ContinuationLedger& ledger, double slack = 1e-6);

nlohmann::ordered_json to_json(const ContinuationLedger& ledger);
nlohmann::ordered_json to_json(const LedgerAudit& audit);

}  // namespace swaa
