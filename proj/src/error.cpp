#include "swaa/error.hpp"

namespace swaa {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::hyperbolicity_loss: return "hyperbolicity-loss";
    case ErrorKind::ordering: return "ordering";
    case ErrorKind::domain: return "domain";
    case ErrorKind::config: return "config";
    case ErrorKind::admissibility: return "admissibility";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::ball_escape: return "ball-escape";
    case ErrorKind::schedule_stall: return "schedule-stall";
    case ErrorKind::invariant_violation: return "invariant-violation";
    case ErrorKind::jacobian_collapse: return "jacobian-collapse";
    case ErrorKind::evaluation: return "evaluation";
    case ErrorKind::no_root: return "no-root";
    case ErrorKind::cfl_violation: return "cfl-violation";
    case ErrorKind::speed_sign: return "speed-sign";
    case ErrorKind::blow_up: return "blow-up";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::admissibility:
      return 2;
    case ErrorKind::convergence:
    case ErrorKind::ball_escape:
    case ErrorKind::schedule_stall:
      return 3;
    case ErrorKind::invariant_violation:
    case ErrorKind::jacobian_collapse:
    case ErrorKind::hyperbolicity_loss:
    case ErrorKind::ordering:
    case ErrorKind::evaluation:
      return 4;
    case ErrorKind::config:
    case ErrorKind::domain:
      return 5;
    default:
      return 1;
  }
}

}  // namespace swaa
