#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdboot {

/// Malformed or non-finite input data (bad shapes, NaN/Inf, unreadable CSV).
class InvalidDataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A coordinate whose estimated variance is not strictly positive.
class DegenerateCoordinateError : public InvalidDataError {
public:
    DegenerateCoordinateError(std::size_t index, const std::string& what)
        : InvalidDataError(what), index_(index) {}

    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// A coordinate pair (j, k) whose standardizing variance is zero.
class DegeneratePairError : public InvalidDataError {
public:
    DegeneratePairError(std::size_t j, std::size_t k, const std::string& what)
        : InvalidDataError(what), j_(j), k_(k) {}

    [[nodiscard]] std::size_t first() const noexcept { return j_; }
    [[nodiscard]] std::size_t second() const noexcept { return k_; }

private:
    std::size_t j_;
    std::size_t k_;
};

/// Invalid parameters or experiment configuration (levels, B, unknown keys).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace hdboot
