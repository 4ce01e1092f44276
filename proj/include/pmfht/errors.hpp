#pragma once

#include <stdexcept>
#include <string>

namespace pmfht {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad input data: unreadable/malformed files, degenerate sampling.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

/// Invalid parameters or mismatched operands (wrong basis, wrong order, bad spec).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Numerical failure: eigensolver non-convergence, near-defective operators.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

} // namespace pmfht
