// errors.hpp — error types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace tvdiel {

// Thrown when a quadrature engine cannot reach the requested tolerance.
class accuracy_error : public std::runtime_error {
public:
    explicit accuracy_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a spec or run configuration violates an invariant.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tvdiel
