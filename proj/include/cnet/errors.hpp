#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cnet {

// Input data is inconsistent (unknown ids, cycles, asymmetric matrices...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller asked for something the engine cannot do (bad weights, bad rule parameters...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed dataset text. Line and column are 1-based; 0 means unknown.
class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : DataError(what), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// A dataset entity violates an invariant. entity() names the offending id.
class ValidationError : public DataError {
public:
    ValidationError(const std::string& what, std::string entity)
        : DataError(what), entity_(std::move(entity)) {}

    const std::string& entity() const { return entity_; }

private:
    std::string entity_;
};

class DuplicateIdError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

} // namespace cnet
