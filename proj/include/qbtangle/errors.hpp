// Error types thrown by the qbtangle library. Each carries a stable kind
// string so the CLI can map domain failures onto exit codes.

#pragma once

#include <stdexcept>
#include <string>

namespace qbt {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Available field energy omega_hat^2 - 1 - K^2 is negative.
struct InsufficientEnergy : Error {
  explicit InsufficientEnergy(const std::string& what)
      : Error("InsufficientEnergy", what) {}
};

// omega_hat^2 outside the domain of a threshold formula.
struct InvalidEnergy : Error {
  explicit InvalidEnergy(const std::string& what) : Error("InvalidEnergy", what) {}
};

// Coupling ratio outside every validity window of the requested formula.
struct OutOfRange : Error {
  explicit OutOfRange(const std::string& what) : Error("OutOfRange", what) {}
};

// Optimal-time formula diverges at the requested coupling ratio.
struct DivergentTime : Error {
  explicit DivergentTime(const std::string& what) : Error("DivergentTime", what) {}
};

// Printed optimal-field formula requires Bz^2 < 0.
struct NegativeBzSquared : Error {
  explicit NegativeBzSquared(const std::string& what)
      : Error("NegativeBzSquared", what) {}
};

// A tangle evaluated below -1e-9; indicates an implementation bug, not data.
struct NegativeTangle : Error {
  explicit NegativeTangle(const std::string& what) : Error("NegativeTangle", what) {}
};

// Integrator step exceeds the stability/accuracy bound.
struct StepTooLarge : Error {
  explicit StepTooLarge(const std::string& what) : Error("StepTooLarge", what) {}
};

// Search bounds describe an empty domain.
struct EmptyBounds : Error {
  explicit EmptyBounds(const std::string& what) : Error("EmptyBounds", what) {}
};

// Bad key=value config or scenario file; maps to usage exit status.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

}  // namespace qbt
