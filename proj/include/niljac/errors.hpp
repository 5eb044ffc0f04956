#pragma once

// Exception taxonomy shared by all modules.  Recognition outcomes that are
// ordinary results (Dependent, NoMatch, ...) are modelled as values, not
// exceptions; the types here signal contract violations and bad input.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace niljac {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed text input.  `position` is a 1-based character offset into the
// offending line (0 when no position applies).
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos = 0)
        : Error(pos ? msg + " (at position " + std::to_string(pos) + ")" : msg),
          position(pos) {}
};

// Mixing scalars from different fields (e.g. GF(5) with GF(7)).
struct FieldMismatchError : Error {
    using Error::Error;
};

// Division by a zero scalar or a zero divisor polynomial.
struct DivisionByZeroError : Error {
    using Error::Error;
};

// An operation needs to divide by a small integer that vanishes in the
// coefficient field (prime characteristic too small for the degree at hand).
struct CharacteristicTooSmallError : Error {
    using Error::Error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

// A map does not satisfy the structural requirements of its declared shape,
// or an operation's shape precondition fails.
struct ShapeMismatchError : Error {
    using Error::Error;
};

// potential_of precondition: the pair (u, v0) is not closed (u_x + v0_y != 0).
struct NotClosedError : Error {
    using Error::Error;
};

// Generator parameter validation; collects every offending field.
struct InvalidParamsError : Error {
    using Error::Error;
};

// An exhaustive search space exceeds the configured candidate cap.
struct SpaceTooLargeError : Error {
    using Error::Error;
};

// Two independent computations of the same quantity disagreed.  Indicates an
// arithmetic bug in this library, never a property of the input.
struct InternalCheckError : Error {
    using Error::Error;
};

}  // namespace niljac
