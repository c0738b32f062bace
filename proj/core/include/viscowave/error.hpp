#pragma once

#include <stdexcept>
#include <string>

namespace viscowave {

/// Rejected input: malformed specs, out-of-range parameters, schema violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative procedure ran out of iterations before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_value)
      : std::runtime_error(what), last_value_(last_value) {}
  [[nodiscard]] double last_value() const noexcept { return last_value_; }

 private:
  double last_value_;
};

/// Non-finite values appeared in the state during time stepping.
class BlowupOrInstability : public std::runtime_error {
 public:
  BlowupOrInstability(const std::string& what, long step_index)
      : std::runtime_error(what), step_index_(step_index) {}
  [[nodiscard]] long step_index() const noexcept { return step_index_; }

 private:
  long step_index_;
};

}  // namespace viscowave
