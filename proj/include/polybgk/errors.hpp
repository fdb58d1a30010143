#pragma once

#include <stdexcept>
#include <string>

namespace polybgk {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter is outside its admissible range.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A macroscopic or kinetic state is physically inadmissible (ρ ≤ 0, P ≤ 0, ...).
class InvalidState : public Error {
public:
    using Error::Error;
};

/// Newton projection of the discrete equilibrium failed.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared during time integration, or an element mean went negative.
class BlowUpError : public Error {
public:
    using Error::Error;
};

/// Inconsistent solver configuration (e.g. specular wall with an offset velocity grid).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration file.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace polybgk
