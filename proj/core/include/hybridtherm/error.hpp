#pragma once

#include <stdexcept>
#include <string>

namespace hybridtherm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad parameter values, inconsistent keys, sign-pattern mismatch.
class ValidationError : public Error {
public:
    using Error::Error;
};

enum class NumericalFailure {
    NoUniqueSteadyState,
    SolverResidual,
    NegativeProbability,
    NoCrossing,
    NoEntropySink,
    AbsorbingState,
    InsufficientBlocks,
};

[[nodiscard]] const char* to_string(NumericalFailure kind) noexcept;

/// A computation that cannot produce a meaningful result for valid-looking input.
class NumericalError : public Error {
public:
    NumericalError(NumericalFailure kind, const std::string& what)
        : Error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] NumericalFailure kind() const noexcept { return kind_; }

private:
    NumericalFailure kind_;
};

}  // namespace hybridtherm
