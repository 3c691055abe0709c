#pragma once

#include <stdexcept>
#include <string>

namespace did {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Scenario/profile file could not be parsed (malformed JSON, wrong types,
/// missing or unknown keys). Carries a location hint where available.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// A geometric recursion does not converge (p_n * p_b * p_r == 1).
class DivergenceError : public Error {
public:
    explicit DivergenceError(const std::string& msg) : Error(msg) {}
};

/// Requested target cannot be reached (e.g. clue target above the maximum
/// achievable score). Never raised for valid default-weight profiles.
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& msg) : Error(msg) {}
};

/// A decision tree violated a structural invariant (branch probabilities
/// not summing to 1, more than one repeat per path).
class StructureError : public Error {
public:
    explicit StructureError(const std::string& msg) : Error(msg) {}
};

} // namespace did
