#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vmv {

// Failure taxonomy. The CLI maps DataError to exit code 2 and
// NumericalFault to exit code 3; usage errors are handled by the
// argument parser and exit with 1.

/// Malformed or missing input data (CSV schema, bundles, config files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV parse failure carrying the 1-based source line.
class ParseError : public DataError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : DataError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Truth and sensor streams do not share a usable time grid.
class AlignmentError : public DataError {
 public:
  using DataError::DataError;
};

/// Any numerical failure: non-finite states, envelope violations,
/// singular innovation covariance.
class NumericalFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A candidate-model step produced a non-finite state.
class IntegrationFault : public NumericalFault {
 public:
  using NumericalFault::NumericalFault;
};

/// The plant left its validity envelope (roll/pitch bound, non-finite state).
class SimulationAbort : public NumericalFault {
 public:
  using NumericalFault::NumericalFault;
};

/// An observer recursion failed; carries the step index it failed at.
class FilterFault : public NumericalFault {
 public:
  FilterFault(std::size_t step, const std::string& what)
      : NumericalFault("filter fault at step " + std::to_string(step) + ": " + what),
        step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace vmv
