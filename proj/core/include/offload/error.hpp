#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace offload {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based, 0 when unknown; `field` is a
/// JSON pointer or token name, empty when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::string field = {});

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// Well-formed input that violates one or more model invariants.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    ValidationError(const std::string& context, std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

class InvalidGraphError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnknownIdError : public Error {
public:
    explicit UnknownIdError(const std::string& id);
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// Arithmetic precondition failure (zero speed, zero bandwidth, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class SimulationError : public Error {
public:
    using Error::Error;
};

class InsufficientFleetError : public SimulationError {
public:
    InsufficientFleetError(std::size_t stage, std::size_t required, std::size_t available);

    std::size_t stage() const noexcept { return stage_; }
    std::size_t required() const noexcept { return required_; }
    std::size_t available() const noexcept { return available_; }

private:
    std::size_t stage_;
    std::size_t required_;
    std::size_t available_;
};

}  // namespace offload
