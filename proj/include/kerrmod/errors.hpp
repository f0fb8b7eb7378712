#pragma once

#include <stdexcept>
#include <string>

namespace kerrmod {

/// Base class for all library errors. kind() is a stable machine-readable
/// tag used in error records.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* kind() const noexcept { return "error"; }
};

/// A constructor or operation received an argument outside its domain.
class InvalidParameterError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid-parameter"; }
};

/// A stochastic integration step collapsed the state norm below the
/// recoverable floor; the step size is too large for the parameter regime.
class StepFailureError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "step-failure"; }
};

/// Probability mass reached the top of the truncated number basis.
/// Carries the first sample time at which the monitor band overflowed.
class TruncationOverflowError : public Error {
public:
    TruncationOverflowError(const std::string& msg, double t)
        : Error(msg), time(t) {}
    const char* kind() const noexcept override { return "truncation-overflow"; }
    double time;
};

/// Mandel Q is undefined because the mean occupation is not positive.
class UndefinedQError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "undefined-q"; }
};

/// A density matrix failed a structural check (hermiticity residue too
/// large for a phase-space transform to be meaningful).
class CorruptedDensityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "corrupted-density"; }
};

/// No accumulated-phase root was found inside the bracketed search window.
class NoSuperpositionTimeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "no-superposition-time"; }
};

/// A stroboscopic section was requested but no (or no unique) modulation
/// channel defines the strobe period.
class StrobeUndefinedError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "strobe-undefined"; }
};

/// An iterative procedure (steady-state relaxation, root polish) did not
/// converge within its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence"; }
};

/// The adaptive ODE controller drove the step size below the resolvable
/// floor; the problem is too stiff for the explicit integrator.
class StiffnessError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "stiffness"; }
};

/// Configuration parsing failed; the message names the offending key.
class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config"; }
};

} // namespace kerrmod
