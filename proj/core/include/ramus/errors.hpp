#pragma once

#include <stdexcept>
#include <string>

namespace ramus {

// Invalid argument values or inconsistent dimensions.
class parameter_error : public std::runtime_error {
public:
    explicit parameter_error(const std::string& what) : std::runtime_error(what) {}
};

// Geometric preconditions violated (source outside sphere, sensor inside conductor, empty ROI).
class geometry_error : public std::runtime_error {
public:
    explicit geometry_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed persisted data (lead-field files, config files).
class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure that the contracts promise cannot happen for valid inputs.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Inputs that are structurally valid but carry no usable signal (all-zero data, zero-norm matrix).
class degenerate_input_error : public std::runtime_error {
public:
    explicit degenerate_input_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ramus
