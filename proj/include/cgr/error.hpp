#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cgr {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when declarations violate a structural invariant. Carries every
/// diagnostic found, not only the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> diagnostics);

    [[nodiscard]] auto diagnostics() const -> const std::vector<std::string> & { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string & message);

    [[nodiscard]] auto line() const -> std::size_t { return line_; }
    [[nodiscard]] auto column() const -> std::size_t { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Operands defined over different supports.
class SupportMismatch : public Error {
public:
    SupportMismatch() : Error("operands are defined over different supports") {}
};

/// A search or enumeration exceeded its configured size bound.
class BoundExceeded : public Error {
public:
    using Error::Error;
};

/// A finite budget ran out before a result that must be exact was reached.
class BudgetExhausted : public Error {
public:
    using Error::Error;
};

/// Re-applying a rule with a projection already used in the derivation.
class UselessApplication : public Error {
public:
    using Error::Error;
};

/// Caller broke an operation's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace cgr
