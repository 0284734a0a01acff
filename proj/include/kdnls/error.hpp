#pragma once

#include <stdexcept>
#include <string>

namespace kdnls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two fields or a field and a symbol live on different grids.
class GridMismatch : public Error {
 public:
  GridMismatch() : Error("grid mismatch") {}
};

/// Mass has leaked into the outer half of the periodic box.
class BoundaryMassError : public Error {
 public:
  BoundaryMassError(double fraction, double threshold)
      : Error("boundary mass fraction " + std::to_string(fraction) + " exceeds " +
              std::to_string(threshold)),
        fraction_(fraction) {}
  double fraction() const noexcept { return fraction_; }

 private:
  double fraction_;
};

/// A derivative order or band requirement exceeds what the grid resolves.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Time step larger than the nonlinear advection bound allows.
class StabilityGuardError : public Error {
 public:
  StabilityGuardError(double dt, double suggested)
      : Error("dt " + std::to_string(dt) + " violates stability guard; suggested dt " +
              std::to_string(suggested)),
        suggested_dt_(suggested) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double suggested_dt_;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kdnls
