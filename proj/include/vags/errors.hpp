#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vags {

// Every failure thrown by the library derives from Error. The CLI maps the
// three families (validation, divergence, I/O) onto distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DimensionError : public ValidationError {
public:
    DimensionError(std::ptrdiff_t expected, std::ptrdiff_t got)
        : ValidationError("dimension mismatch: expected " + std::to_string(expected) +
                          ", got " + std::to_string(got)) {}
    using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConditionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ContractError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Malformed JSON; carries the position reported by the parser.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : ValidationError(what), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Non-finite or exploding state during integration.
class DivergenceError : public Error {
public:
    explicit DivergenceError(int step)
        : Error("trajectory diverged at step " + std::to_string(step)), step_(step) {}

    int step() const { return step_; }

private:
    int step_;
};

class OracleInsufficiencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::string path)
        : Error(what + ": " + path), path_(std::move(path)) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace vags
