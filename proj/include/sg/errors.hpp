// errors.hpp — error taxonomy shared by the library and the CLI exit codes.

#pragma once

#include <stdexcept>
#include <string>

namespace sg {

// Invalid configuration, file-format or precondition violations (CLI exit 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data, hash mismatches (CLI exit 3).
struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failures: solver non-convergence, NaN loss aborts (CLI exit 4).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape mismatch in tensor operations; reports both shapes.
struct shape_error : std::runtime_error {
    explicit shape_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sg
