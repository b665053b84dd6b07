#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace equichow {

// Violated precondition: table mismatch, grade-mismatched substitution,
// malformed descriptor, and similar caller errors.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Text that could not be parsed; carries a 1-based position.
class ParseError : public InvalidInput {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : InvalidInput(what + " (line " + std::to_string(line) + ", column " +
                       std::to_string(column) + ")"),
          message_(what),
          line_(line),
          column_(column) {}

    const std::string& message() const { return message_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

// A localization sum whose denominators did not cancel.
class DenominatorResidue : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace equichow
