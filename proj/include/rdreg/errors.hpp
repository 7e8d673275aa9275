#pragma once

#include <stdexcept>
#include <string>

namespace rdreg {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration / input validation.
struct ConfigError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// Eigenproblem.
struct NonPositiveDiffusion : Error { using Error::Error; };
struct ResolutionTooCoarse : Error { using Error::Error; };
struct EigensolveFailure : Error { using Error::Error; };
struct BoundaryViolation : Error { using Error::Error; };

// Spectral model.
struct DerivativeUnavailable : Error { using Error::Error; };
struct TailNotConverged : Error { using Error::Error; };

// Synthesis.
struct Uncontrollable : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct NotHurwitz : Error { using Error::Error; };
struct SolveSingular : Error { using Error::Error; };
struct AlphaTooSmall : Error { using Error::Error; };
struct NotFeasibleUpToNMax : Error { using Error::Error; };
struct CauchyConditionFailed : Error { using Error::Error; };
struct IntegrationFailure : Error { using Error::Error; };

// Equilibrium.
struct SingularClosedLoop : Error { using Error::Error; };

// Simulation.
struct InstabilityOverflow : Error {
    InstabilityOverflow(const std::string& msg, double t) : Error(msg), time(t) {}
    double time;
};
struct IncompatibleInitialCondition : Error { using Error::Error; };
struct WindowTooShort : Error { using Error::Error; };

} // namespace rdreg
