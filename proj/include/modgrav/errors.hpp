#pragma once

#include <stdexcept>
#include <string>

namespace modgrav {

// Bad inputs: out-of-range parameters, inconsistent geometry, malformed config.
// Mapped to exit code 1 by the CLI.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Solver or quadrature failure. Mapped to exit code 2 by the CLI.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace modgrav
