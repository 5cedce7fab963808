#pragma once

#include <stdexcept>
#include <string>

namespace polariton {

// Raised when a physical modelling assumption is violated (off-resonant
// carriers, nonzero detuning where the derivation needs resonance, drive too
// strong for the rotating-wave reduction, ...).
class PhysicsGuardError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Integrator guards, positivity loss and similar numerical failures.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitianError : public std::invalid_argument {
 public:
  NotHermitianError(const std::string& what, double deviation)
      : std::invalid_argument(what), deviation_(deviation) {}

  /// ‖M − M†‖_F of the rejected matrix.
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

// Malformed or schema-violating scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace polariton
