#pragma once

#include <stdexcept>
#include <string>

namespace gle {

// Every failure mode the library signals. Integrators and validators rely on
// these being thrown instead of letting NaN/Inf propagate silently.
enum class ErrorKind {
  ZeroSeparation,
  CoincidentParticles,
  NegativeTime,
  StepRejected,
  NonFinite,
  GammaZero,
  HorizonExceeded,
  DimensionMismatch,
  NonPositiveRadicand,
  WrongBetaRegime,
  RegimeMismatch,
  BurnInTooShort,
  EnsembleTooSmall,
  ParseError,
  ValidationError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries the simulation time at which the integrator gave up.
class StepRejectedError : public Error {
 public:
  StepRejectedError(double t, const std::string& what)
      : Error(ErrorKind::StepRejected, what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace gle
