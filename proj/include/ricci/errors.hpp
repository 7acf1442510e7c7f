#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid construction parameters or configuration values.
struct ConfigError : Error {
    using Error::Error;
};

/// Bad call sequence or missing/mismatched inputs (wrong snapshot times,
/// too few snapshots, empty trajectory, ...).
struct UsageError : Error {
    using Error::Error;
};

/// A point or parameter lies outside the mathematical domain of an
/// operation (resample target outside the source disc, t <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

/// A numerically checked precondition failed (curvature bound on initial
/// data, initial ordering of a comparison pair, ...).
struct PreconditionError : Error {
    using Error::Error;
};

/// A verifier's hypothesis failed. Distinct from a conclusion failure,
/// which is reported as a failed check, not an exception.
struct HypothesisError : Error {
    using Error::Error;
};

/// Iterative linear solver did not reach the requested tolerance.
struct SolverError : Error {
    using Error::Error;
};

/// Non-finite values or |u| beyond the overflow guard during a run.
struct DivergenceError : Error {
    DivergenceError(const std::string& msg, double time, std::size_t node)
        : Error(msg), t(time), node_index(node) {}
    double t;
    std::size_t node_index;
};

/// Construction-scheme invariant violated (monotonicity of the exhaustion).
struct ConstructionError : Error {
    using Error::Error;
};

/// Exhaustion did not converge within the requested index list.
struct ConvergenceError : Error {
    using Error::Error;
};

/// File format or filesystem problem.
struct IoError : Error {
    using Error::Error;
};

} // namespace ricci
