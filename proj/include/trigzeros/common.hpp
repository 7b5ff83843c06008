#pragma once

#include <stdexcept>
#include <string>

namespace trigzeros {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

#define TRIGZEROS_VERSION "0.1.0"

// Exit codes shared by the CLI and the experiment runners.
enum class ExitCode : int {
  ok = 0,
  invalid_config = 2,
  tolerance_unachieved = 3,
  invariant_violation = 4,
};

// Rejected preconditions and malformed configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A requested tolerance could not be met; carries the achieved value.
struct ToleranceError : std::runtime_error {
  ToleranceError(const std::string& what, double achieved_)
      : std::runtime_error(what), achieved(achieved_) {}
  double achieved;
};

// A mathematical invariant failed at runtime (evaluator bug, not user error).
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace trigzeros
