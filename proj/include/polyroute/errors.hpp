#pragma once

#include <stdexcept>
#include <string>

namespace polyroute {

// Error hierarchy shared by the whole library. Every exception carries a
// human-readable message; the CLI maps each type to a distinct exit code.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed instance semantics (bad dimension, bad tolerances, ...).
struct InstanceError : Error {
    using Error::Error;
};

// Operation argument outside its documented domain.
struct ParameterError : Error {
    using Error::Error;
};

// File could not be parsed into an instance or route.
struct ParseError : Error {
    using Error::Error;
};

// A segment meets an obstacle boundary in infinitely many points
// (flat-face coincidence); the finite-crossing hypothesis fails.
struct UMViolation : Error {
    using Error::Error;
};

// Entry/exit recursion could not establish its invariants.
struct ScheduleError : Error {
    using Error::Error;
};

// Collar routing failed (vertex-doubling cap exceeded).
struct CollarError : Error {
    using Error::Error;
};

// Reroute assembly hit an inconsistency the construction rules out.
struct EngineError : Error {
    using Error::Error;
};

// Query endpoints unusable (inside or hugging an obstacle closure, outside
// the region).
struct InputError : Error {
    using Error::Error;
};

// Instance family violates a validation hypothesis.
struct ValidationError : Error {
    using Error::Error;
};

// Random generation gave up.
struct GenerationError : Error {
    using Error::Error;
};

// Operation not defined for this instance (dimension or shape).
struct UnsupportedInstance : Error {
    using Error::Error;
};

} // namespace polyroute
