#pragma once

#include <stdexcept>
#include <string>

namespace torusrev {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Inputs disagree with each other (dimension or hbar mismatch, bad ranges, ...).
struct ParamMismatch : Error {
    explicit ParamMismatch(const std::string& what) : Error(what) {}
};

// A numerical procedure could not certify its own accuracy. Distinguished from
// ParamMismatch because callers may want to retry with finer controls.
struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(what) {}
};

// Step-halving disagreement stayed above the certification threshold.
struct QuadratureUnderResolved : NumericalError {
    explicit QuadratureUnderResolved(const std::string& what) : NumericalError(what) {}
};

// A requested mode lattice would exceed the configured point budget.
struct WindowOverflow : Error {
    explicit WindowOverflow(const std::string& what) : Error(what) {}
};

// A requested phase-space table or grid would exceed the configured cell budget.
struct GridTooLarge : Error {
    explicit GridTooLarge(const std::string& what) : Error(what) {}
};

// Rational revival fraction M/N must be in lowest terms.
struct NonIrreducible : Error {
    explicit NonIrreducible(const std::string& what) : Error(what) {}
};

// The width-zero copy profile is a genuine delta; it has no pointwise values.
struct SingularAtZeroWidth : Error {
    explicit SingularAtZeroWidth(const std::string& what) : Error(what) {}
};

// A revival mixture with p0 != 0 needs the residual time to place its centers.
struct DriftUnresolved : Error {
    explicit DriftUnresolved(const std::string& what) : Error(what) {}
};

// Malformed profile data (bad CSV, norm or decay violation).
struct InvalidProfile : Error {
    explicit InvalidProfile(const std::string& what) : Error(what) {}
};

} // namespace torusrev
