#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plamb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a distribution would carry total mass above one.
class MassError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          message_(what), line_(line), column_(column) {}

    /// The message without its position prefix.
    const std::string& message() const { return message_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

class ReservedNameError : public ParseError {
public:
    using ParseError::ParseError;
};

class FreshNameCollision : public Error {
public:
    using Error::Error;
};

class LabelNotApplicable : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SupportTooLarge : public Error {
public:
    using Error::Error;
};

class GranularityError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace plamb
