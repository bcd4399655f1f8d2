#pragma once

#include <stdexcept>
#include <string>

namespace riesz {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A negative-power (or otherwise zero-singular) multiplier was applied to a
/// field whose mean does not vanish.
class ZeroModeError : public Error {
public:
    using Error::Error;
};

/// Spectral support of an input lies outside the annulus an operation needs.
class SupportError : public Error {
public:
    using Error::Error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(what);
}

}  // namespace riesz
