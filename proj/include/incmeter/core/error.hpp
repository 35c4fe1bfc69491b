#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace incmeter {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (schema, constraints, CSV, manifest), with a 1-based position.
class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          message_(std::move(message)), line_(line), column_(column) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed input that violates a schema or typing rule.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Order comparison between values of different kinds.
class TypeError : public Error {
public:
    using Error::Error;
};

/// A brute-force routine was asked to work above its configured size bound.
class BoundExceeded : public Error {
public:
    using Error::Error;
};

} // namespace incmeter
