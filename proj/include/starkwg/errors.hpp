#ifndef STARKWG_ERRORS_HPP
#define STARKWG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace starkwg {

// Error taxonomy mirrors the CLI exit codes:
//   HypothesisError -> 2, SolverError -> 3, ConfigError -> 4.
// Anything else escaping main is a plain bug and exits 1.

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A model hypothesis fails: d*max|gamma| >= 1, a field direction outside the
// admissible cone, or a distortion strong enough to degenerate the metric.
class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& msg) : Error(msg) {}
};

// An eigensolver or linear solve did not meet its residual contract.
class SolverError : public Error {
 public:
  SolverError(const std::string& msg, double best_residual = -1.0)
      : Error(msg), best_residual(best_residual) {}
  double best_residual;  // best residual reached before giving up, <0 if n/a
};

// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// The spectrum below the transverse threshold is empty (straight guide or
// too weak a bend). A legitimate physical outcome, reported as a status
// rather than a failure by the CLI.
class NoBoundStateError : public Error {
 public:
  explicit NoBoundStateError(const std::string& msg) : Error(msg) {}
};

// No eigenvalue of the distorted operator stayed inside the trust radius of
// the reference energy for any distortion strength.
class ResonanceNotFoundError : public SolverError {
 public:
  explicit ResonanceNotFoundError(const std::string& msg)
      : SolverError(msg) {}
};

}  // namespace starkwg

#endif
