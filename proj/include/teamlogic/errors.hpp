#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace teamlogic {

// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Formula-syntax failure. Carries the byte offset where parsing stopped and
// the set of token descriptions that would have been accepted at that point.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected);
    std::size_t offset;
    std::vector<std::string> expected;
};

// A formula mentions a proposition outside the model's signature, or a
// requested signature is not available on the model.
class SignatureError : public Error {
public:
    using Error::Error;
};

// A construction or search would exceed the configured resource budget.
// The message reports the exact counts that tripped the limit.
class BudgetError : public Error {
public:
    using Error::Error;
};

// Malformed input: JSON schema violations, precondition failures,
// out-of-range arguments.
class InputError : public Error {
public:
    using Error::Error;
};

// A formula path does not address a node of the given formula.
class PathError : public Error {
public:
    using Error::Error;
};

} // namespace teamlogic
