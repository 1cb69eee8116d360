#pragma once

#include <stdexcept>
#include <string>

namespace disclosure {

/// Base class for all errors raised by the solver library.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Conditional mean requested over a set of (numerically) zero prior mass.
struct DegenerateTruncation : SolverError {
    using SolverError::SolverError;
};

/// A posterior distribution does not preserve the prior mean.
struct MeanMismatch : SolverError {
    using SolverError::SolverError;
};

/// A cost specification violates convexity, normalization, or bounds.
struct InvalidCost : SolverError {
    using SolverError::SolverError;
};

/// None of the structural candidates for the acquisition problem converged.
struct NoCandidateConverged : SolverError {
    using SolverError::SolverError;
};

/// The finite-grid linear program has no feasible point.
struct LpInfeasible : SolverError {
    using SolverError::SolverError;
};

/// A price certificate could not be constructed or failed verification.
struct CertificateFailed : SolverError {
    using SolverError::SolverError;
};

/// An equilibrium search came back empty where existence is guaranteed.
struct ExistenceViolation : SolverError {
    using SolverError::SolverError;
};

/// Malformed configuration input (CLI arguments or structured records).
struct ConfigError : SolverError {
    using SolverError::SolverError;
};

}  // namespace disclosure
