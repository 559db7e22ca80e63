#pragma once

#include <stdexcept>
#include <string>

namespace coplan {

/// Shape or index mismatch between operands.
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& msg) : std::invalid_argument("dimension error: " + msg) {}
};

/// Argument outside its documented domain.
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument("argument error: " + msg) {}
};

/// Numerical failure (indefinite matrix, singular solve, non-finite value).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error("numeric error: " + msg) {}
};

/// Ill-posed system model (non-stabilizable pair, Riccati divergence).
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& msg) : std::runtime_error("model error: " + msg) {}
};

/// Bad configuration or environment file.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error("config error: " + msg) {}
};

} // namespace coplan
