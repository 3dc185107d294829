#pragma once

#include <stdexcept>
#include <string>

namespace gapprox {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// lattice_geometry
struct SiteCapExceeded : Error { using Error::Error; };
struct InvalidDims : Error { using Error::Error; };
struct EmptyRegion : Error { using Error::Error; };
struct InvalidMetric : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };

// operator_algebra
struct SupportNotContained : Error { using Error::Error; };
struct LatticeMismatch : Error { using Error::Error; };

// spin_models
struct NonHermitianTerm : Error { using Error::Error; };
struct RangeViolation : Error { using Error::Error; };
struct DecompositionMismatch : Error { using Error::Error; };

// spectral_engine
struct ConvergenceFailure : Error { using Error::Error; };
struct DegenerateGroundState : Error { using Error::Error; };
struct ShiftMissing : Error { using Error::Error; };

// projector_pipeline
struct NonPositiveInput : Error { using Error::Error; };
struct SupportViolation : Error { using Error::Error; };
struct QuadratureNotConverged : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };

// lr_probe
struct OverlappingSupports : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };

// experiment_cli
struct ConfigParseError : Error { using Error::Error; };
struct InsufficientLadder : Error { using Error::Error; };

}  // namespace gapprox
