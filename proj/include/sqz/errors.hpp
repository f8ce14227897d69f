// errors.hpp — exception types shared by the library and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Bad or unsupported input: missing keys, non-positive quantities, unstable drive.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical kernel failed to meet its contract (quadrature, ODE step size, eigen-solve).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A physical invariant of a state or generator was violated beyond tolerance.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sqz
