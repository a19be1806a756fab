#pragma once

#include <stdexcept>
#include <string>

namespace bnf {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input. line is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Precondition or contract violation on well-formed input.
class DomainError : public Error {
public:
    using Error::Error;
};

// A configured node-count, stage or domain budget ran out.
class BudgetError : public Error {
public:
    using Error::Error;
};

} // namespace bnf
