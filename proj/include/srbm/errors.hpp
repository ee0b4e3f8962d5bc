#pragma once

#include <stdexcept>
#include <string>

namespace srbm {

// Typed failure taxonomy. Every throwing operation in the library raises
// Error with one of these codes; the CLI maps codes onto process exit codes.
enum class ErrorCode {
    InvalidCovariance,      // sigma not symmetric positive definite
    SingularTransform,      // cone-to-quadrant map with det(T) ~ 0
    AngleOutOfRange,        // ray angle outside the open quadrant (0, pi/2)
    UnsupportedDrift,       // analytic pipeline requires mu1 < 0 and mu2 < 0
    UnstableModel,          // operation requires a positive-recurrent model
    NotOnEllipse,           // point does not satisfy gamma(theta) = 0
    DegenerateArc,          // arc endpoints coincide where an interior is needed
    SaddleIsPole,           // theta(alpha) coincides with a pole candidate
    DerivativeAtBranchPoint,// implicit slope requested where the tangent is vertical
    ContinuationDiverged,   // rotation walk failed to re-enter the initial domain
    PoleHit,                // transform evaluated exactly at one of its poles
    ResidueUnstable,        // Richardson extrapolants failed to settle
    BranchDiscontinuity,    // square-root branch tracking detected a jump
    QuadratureInconsistent, // refinement failed to converge or output negative
    WrongRegime,            // constant requested for a regime that lacks it
    ConstantUnavailable,    // transform not evaluable where the constant needs it
    ReflectionInfeasible,   // no complementarity case admits a nonnegative push
    InsufficientData,       // too few populated histogram cells along the ray
    ParseError,             // malformed parameter file or angle literal
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace srbm
