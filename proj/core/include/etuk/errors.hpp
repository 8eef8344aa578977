#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace etuk {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes (io -> 1, usage/validation -> 2, capability -> 3).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Malformed input file; the message names the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Bad configuration or parameters (k > m, negative epsilon, unknown scheme...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Input violates a documented contract (e.g. a prediction row of the wrong size).
class ValidationError : public Error {
public:
    using Error::Error;
};

// The requested operation is not defined for the given input: unsupported
// metric for a bound, oracle size guards.
class CapabilityError : public Error {
public:
    using Error::Error;
};

}  // namespace etuk
