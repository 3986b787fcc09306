#include "newton_measure/errors.hpp"

namespace nmeasure {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::OverflowRegion: return "OverflowRegion";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::SeedEscape: return "SeedEscape";
    case ErrorKind::NotInG: return "NotInG";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::SectorConstantVanishes: return "SectorConstantVanishes";
    case ErrorKind::AnchorTooLow: return "AnchorTooLow";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::DivergedFromSeed: return "DivergedFromSeed";
    case ErrorKind::BelowThreshold: return "BelowThreshold";
    case ErrorKind::ContainmentViolated: return "ContainmentViolated";
    case ErrorKind::RegionViolation: return "RegionViolation";
    case ErrorKind::NumericLoss: return "NumericLoss";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace nmeasure
