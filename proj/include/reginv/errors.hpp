#pragma once

#include <stdexcept>
#include <string>

namespace reginv {

/// Malformed input document (bad JSON, wrong value types, unknown keys).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a model invariant. `field()` names the
/// offending config path, e.g. "model.N0".
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Adaptive quadrature hit its subdivision cap before meeting tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& message, double error_estimate)
        : std::runtime_error(message), error_estimate_(error_estimate) {}

    double error_estimate() const noexcept { return error_estimate_; }

private:
    double error_estimate_;
};

/// Internal invariant broken (e.g. an (r, s) pair outside every case range).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace reginv
