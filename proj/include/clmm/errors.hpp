#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clmm {

/// Tick index outside the configured bound.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Unknown or already-burned position id.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Position whose hold value is zero, so IL and return are undefined.
class DegeneratePositionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed input row. Carries the 1-based line number and offending field.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + what),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// Event log violates time ordering or references a position that does not exist yet.
class OrderingError : public std::runtime_error {
public:
    OrderingError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace clmm
