#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace hdboot {

/**
 * n x p matrix of observations; rows are independent observations.
 *
 * Every entry is finite and n >= 2. Single-column matrices (p = 1) are
 * accepted so that classical one-dimensional procedures run through the same
 * code path.
 */
class DataMatrix {
public:
    explicit DataMatrix(Eigen::MatrixXd values);

    [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    [[nodiscard]] std::size_t p() const noexcept { return static_cast<std::size_t>(values_.cols()); }

private:
    Eigen::MatrixXd values_;
};

/// Symmetric positive semidefinite p x p matrix.
class CovMatrix {
public:
    /// Validates symmetry (1e-12 relative) and PSD (min eigenvalue >= -1e-10 * max diagonal).
    explicit CovMatrix(Eigen::MatrixXd entries);

    /// Skips the eigenvalue check; for matrices that are PSD by construction (Gram products).
    [[nodiscard]] static CovMatrix trusted(Eigen::MatrixXd entries);

    [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t p() const noexcept { return static_cast<std::size_t>(entries_.rows()); }

private:
    struct Unchecked {};
    CovMatrix(Eigen::MatrixXd entries, Unchecked) : entries_(std::move(entries)) {}

    Eigen::MatrixXd entries_;
};

/// Relative tolerance for symmetry checks.
inline constexpr double kSymmetryTolerance = 1e-12;
/// PSD tolerance, relative to the largest diagonal entry.
inline constexpr double kPsdTolerance = 1e-10;

} // namespace hdboot
