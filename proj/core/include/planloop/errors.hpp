#pragma once

#include <stdexcept>
#include <string>

namespace planloop {

/// Raised when an operation receives arguments that violate its preconditions.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for inconsistent loop / imaginer configuration (e.g. a keyframe
/// offset past the imagined horizon).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scenario that cannot be scored, e.g. its no-action baseline never collides.
class ScenarioInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure inside the planning loop, tagged with the refinement it happened in.
class LoopError : public std::runtime_error {
 public:
  LoopError(int iteration, const std::string& stage, const std::string& what)
      : std::runtime_error("loop iteration " + std::to_string(iteration) + " (" + stage + "): " + what),
        iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace planloop
