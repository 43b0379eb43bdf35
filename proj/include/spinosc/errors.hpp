// Exception types shared across the spinosc library.
#pragma once

#include <stdexcept>

namespace spinosc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter validation
struct NonPositiveParameter : Error { using Error::Error; };
struct PerturbativityViolated : Error { using Error::Error; };
struct ConfigParseError : Error { using Error::Error; };

// Scenario plumbing
struct MissingQualityFactor : Error { using Error::Error; };
struct UnsupportedTime : Error { using Error::Error; };
struct NotViolated : Error { using Error::Error; };

// Numerics
struct IndefiniteForm : Error { using Error::Error; };
struct TruncationInsufficient : Error { using Error::Error; };
struct OracleScaleExceeded : Error { using Error::Error; };
struct PointInsideCylinder : Error { using Error::Error; };
struct DerivativeNonConvergent : Error { using Error::Error; };

}  // namespace spinosc
