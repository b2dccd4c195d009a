// errors.hpp -- exception hierarchy shared by all disperse modules.
#pragma once

#include <stdexcept>
#include <string>

namespace disperse {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A model parameter set violates its invariants.
struct InvalidModel : Error { using Error::Error; };

// Evaluation requested inside the guard radius of a pole of epsilon(omega).
struct PoleEvaluation : Error { using Error::Error; };

// The unsubtracted dispersion relation was asked of a model with a pole at
// omega = 0 (conductor-type models).
struct SingularAtZero : Error { using Error::Error; };

// Adaptive quadrature did not converge to the requested tolerance, or the
// integral does not exist classically.
struct QuadratureFailure : Error { using Error::Error; };

// A sampled signal/spectrum does not decay at its grid ends, so the discrete
// transform has no classical meaning.
struct NotDecayed : Error { using Error::Error; };

// Operation not defined for this model variant.
struct UnsupportedModel : Error { using Error::Error; };

// Ladder extrapolation had too few stages or its differences grew.
struct ExtrapolationDiverged : Error { using Error::Error; };

// |epsilon(omega) E(omega)| is non-integrable near omega = 0 and no symmetric
// cancellation applies (even pole order).
struct UnboundedSpectrum : Error { using Error::Error; };

// A required intermediate (e.g. the reflection term exp(B^2)) leaves the
// double range.
struct OverflowError : Error { using Error::Error; };

// Scenario JSON is missing or mistypes a field; message names the field path.
struct MalformedScenario : Error { using Error::Error; };

} // namespace disperse
