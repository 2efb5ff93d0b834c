#pragma once

#include <stdexcept>
#include <string>

namespace shapelab {

// Base class for all failures raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- curve geometry ---
struct ImmersionViolation : Error { using Error::Error; };
struct SelfIntersection : Error { using Error::Error; };
struct NonPositiveTarget : Error { using Error::Error; };
struct DegenerateDirection : Error { using Error::Error; };

// --- bessel oracle ---
struct ConvergenceFailure : Error { using Error::Error; };

// --- finite elements ---
struct MeshFailure : Error { using Error::Error; };
struct SolverDivergence : Error { using Error::Error; };
struct SingularMass : Error { using Error::Error; };
struct EmptyCluster : Error { using Error::Error; };

// --- shape calculus ---
struct WrongBC : Error { using Error::Error; };
struct MissingFlux : Error { using Error::Error; };
struct MultipleEigenvalue : Error { using Error::Error; };
struct NonOrthonormalCluster : Error { using Error::Error; };
struct ZeroFlux : Error { using Error::Error; };
struct ModeTrackingFailure : Error { using Error::Error; };

// --- riemannian structure ---
struct GridMismatch : Error { using Error::Error; };
struct SingularOperator : Error { using Error::Error; };

// --- flow ---
struct StepFailure : Error { using Error::Error; };

// --- experiments ---
struct ConfigError : Error { using Error::Error; };
struct NumericalFailure : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };

}  // namespace shapelab
