#pragma once

#include <stdexcept>
#include <string>

namespace swaa {

enum class ErrorKind {
  hyperbolicity_loss,
  ordering,
  domain,
  config,
  admissibility,
  convergence,
  ball_escape,
  schedule_stall,
  invariant_violation,
  jacobian_collapse,
  evaluation,
  no_root,
  cfl_violation,
  speed_sign,
  blow_up,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the solver stack. The kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// 0 success, 2 admissibility, 3 convergence, 4 invariant / Jacobian collapse,
/// 5 configuration, 1 anything else.
int exit_code(ErrorKind kind);

}  // namespace swaa
