#pragma once

#include <stdexcept>
#include <string>

namespace superspace {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonPositiveArgument : Error {
    explicit NonPositiveArgument(const std::string& w) : Error(w) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& w) : Error(w) {}
};

/// PiScaled addition requires equal powers of pi.
struct MismatchedPiExponent : Error {
    explicit MismatchedPiExponent(const std::string& w) : Error(w) {}
};

/// Grassmann operands built over different numbers of generators.
struct MismatchedN : Error {
    explicit MismatchedN(const std::string& w) : Error(w) {}
};

/// Superpolynomial operands with different (m, n).
struct MismatchedDims : Error {
    explicit MismatchedDims(const std::string& w) : Error(w) {}
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& w) : Error(w) {}
};

struct DegreeTooLarge : Error {
    explicit DegreeTooLarge(const std::string& w) : Error(w) {}
};

struct IndexConstraintViolated : Error {
    explicit IndexConstraintViolated(const std::string& w) : Error(w) {}
};

/// Operation requires super-dimension M = m - 2n > 0.
struct NonPositiveSuperDimension : Error {
    explicit NonPositiveSuperDimension(const std::string& w) : Error(w) {}
};

/// Supersphere integration needs at least one bosonic variable.
struct PurelyFermionic : Error {
    explicit PurelyFermionic(const std::string& w) : Error(w) {}
};

struct GridTooCoarse : Error {
    explicit GridTooCoarse(const std::string& w) : Error(w) {}
};

struct BasisProjectionIncomplete : Error {
    explicit BasisProjectionIncomplete(const std::string& w) : Error(w) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error(w) {}
};

}  // namespace superspace
