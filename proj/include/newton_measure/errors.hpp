#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmeasure {

enum class ErrorKind {
  InvalidInput,
  OverflowRegion,
  ToleranceNotMet,
  PoleHit,
  SeedEscape,
  NotInG,
  NonConvergence,
  SectorConstantVanishes,
  AnchorTooLow,
  MaxIterations,
  DivergedFromSeed,
  BelowThreshold,
  ContainmentViolated,
  RegionViolation,
  NumericLoss,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the engine carries a machine-readable kind so that
/// callers (the orbit router, the CLI) can dispatch without parsing messages.
class NumericError : public std::runtime_error {
 public:
  NumericError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nmeasure
