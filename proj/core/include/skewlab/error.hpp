#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter or configuration is outside its valid range.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A generator or letter index does not refer to an existing generator.
class IndexError : public Error {
public:
    using Error::Error;
};

/// The quaternion (or word) is the identity, so a bound or closed form does
/// not exist.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A randomized construction could not be completed within its retry budget.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// A mathematical invariant that must hold was observed to fail.
class InvariantBreach : public Error {
public:
    using Error::Error;
};

/// A group element lies outside the enumerated ball.
class RadiusExceededError : public Error {
public:
    using Error::Error;
};

/// An element order exceeds the caller's cap.
class OrderCapError : public Error {
public:
    using Error::Error;
};

} // namespace skewlab
