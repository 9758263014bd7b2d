#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stml {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, incompatible grids, unsupported sizes.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input files. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), message_(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

    /// Same error with `prefix` (e.g. a file path) prepended to the message.
    ParseError with_context(const std::string& prefix) const { return ParseError(prefix + message_, line_); }

private:
    std::string message_;
    std::size_t line_;
};

/// Arguments outside the physical model's domain (e.g. unbound electrode energies).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Solver refusals and degenerate numerical problems.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Files that cannot be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace stml
