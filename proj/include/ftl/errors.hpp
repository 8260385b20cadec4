#pragma once

#include <stdexcept>
#include <string>

namespace ftl {

/// Malformed input: scene schema, invalid IFS, inconsistent arguments.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hypothesis required by a formula is violated at the working resolution.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(std::string condition, const std::string& detail)
      : std::runtime_error(condition + ": " + detail), condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

/// The raster is too small or too coarse for the requested computation.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ftl
