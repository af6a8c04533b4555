#pragma once

#include <stdexcept>
#include <string>

namespace nli {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Unknown operator name passed to the registry.
class UnknownOperatorError : public Error {
public:
    explicit UnknownOperatorError(const std::string& name)
        : Error("unknown operator: " + name) {}
};

/// Domain violations: empty grids, NaN inputs, arguments outside an
/// operator's legal domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Malformed or invariant-violating LUT files.
class LutFormatError : public Error {
public:
    explicit LutFormatError(const std::string& what) : Error(what) {}
};

}  // namespace nli
