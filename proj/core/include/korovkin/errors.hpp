#pragma once

#include <stdexcept>
#include <string>

namespace korovkin {

/// Bad input: malformed spec strings, out-of-range parameters, mismatched grids.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iteration did not settle within the allowed number of squarings.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// An estimate was requested for an operator that does not satisfy its hypotheses.
class HypothesisError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace korovkin
