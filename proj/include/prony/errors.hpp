#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prony {

/// Base class of all library errors. `code()` is a stable machine-readable
/// identifier; the CLI copies it into the "error.type" field of its output.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* code() const noexcept { return "error"; }
};

/// Malformed arguments: dimension mismatches, order/length contradictions,
/// specs that violate their own invariants.
class InvalidInputError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "invalid-input"; }
};

/// A triangular solve hit an exactly zero diagonal entry.
class SingularMatrixError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "singular-matrix"; }
};

/// A design system cannot be solved as posed (singular interpolation
/// matrix). Carries the numerical rank and condition estimate of the
/// offending system so the caller can decide between lowering the order
/// and switching to least squares.
class NoSolutionError : public Error {
public:
    NoSolutionError(const std::string& what, std::size_t rank, double condition_estimate)
        : Error(what), rank_(rank), condition_(condition_estimate) {}
    const char* code() const noexcept override { return "no-solution"; }
    std::size_t rank() const noexcept { return rank_; }
    double condition_estimate() const noexcept { return condition_; }

private:
    std::size_t rank_;
    double condition_;
};

/// Parameter identification found a vanishing mode ratio (the signal has
/// shorter memory than the requested model order).
class DegenerateModeError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "degenerate-mode"; }
};

/// Parameter identification found (numerically) repeated mode ratios;
/// polynomial-in-n amplitude models are not supported.
class RepeatedRootError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "repeated-roots"; }
};

/// A response evaluation was requested exactly on a pole.
class EvaluationError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "evaluation"; }
};

} // namespace prony
