#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace momentous {

/// Invalid physical parameters or run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two objects live in different canonical frames, or have incompatible sizes.
class FrameMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sampling grids of two trajectories do not line up.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A file could not be parsed.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The integrated state stopped being finite.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(std::size_t step, double t)
        : std::runtime_error("non-finite state at step " + std::to_string(step) +
                             " (t = " + std::to_string(t) + ")"),
          step_(step), t_(t) {}

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return t_; }

private:
    std::size_t step_;
    double t_;
};

}  // namespace momentous
