#pragma once

#include <stdexcept>
#include <string>

namespace dragkin {

// Every failure raised by the library derives from Error, so callers can
// separate physics/numerics failures from I/O or configuration problems.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a formula (non-positive temperature, u >= c, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The requested quantity diverges (stationary limit past threshold, drifted
// Planck with non-positive effective energy, Doppler pole).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// An iterative or adaptive procedure failed to reach its tolerance.
class NumericError : public Error {
 public:
  NumericError(std::string const& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Evaluation too close to the cyclotron pole Omega^2 = omega_H^2.
class ResonanceError : public Error {
 public:
  ResonanceError(std::string const& what, double detuning)
      : Error(what), detuning_(detuning) {}
  double detuning() const noexcept { return detuning_; }

 private:
  double detuning_;
};

// A postcondition that valid inputs can never violate.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dragkin
