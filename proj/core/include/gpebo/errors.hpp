#pragma once

#include <stdexcept>
#include <string>

namespace gpebo {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Text input (time-function grammar) rejected; position is a 0-based byte offset.
class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t position)
        : error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Non-conformable matrix shapes; message carries both shapes.
class shape_error : public error {
public:
    using error::error;
};

// Scenario or estimator configuration rejected before any run. CLI exit code 2.
class config_error : public error {
public:
    using error::error;
};

// Numeric blow-up during integration; message names time and signal. CLI exit code 3.
class divergence_error : public error {
public:
    divergence_error(const std::string& what, double time)
        : error(what + " at t = " + std::to_string(time)), time_(time) {}

    double time() const { return time_; }

private:
    double time_;
};

} // namespace gpebo
