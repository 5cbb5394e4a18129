#pragma once

#include "hdboot/core/data_matrix.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace hdboot::gaussian {

/// p x r root with factor * factor^T == S (to 1e-8 max entrywise), r = rank.
struct PSDFactor {
    Eigen::MatrixXd factor;
    std::size_t rank = 0;
};

/**
 * Pivoted Cholesky root of a symmetric PSD matrix.
 *
 * At each step the largest remaining diagonal is pivoted in; the
 * factorization stops once it falls below 1e-10 * max diagonal of S. Singular
 * inputs are truncated exactly there, with no jitter. Throws InvalidDataError
 * when the residual Schur complement shows S is indefinite; the message
 * carries the most negative pivot.
 */
[[nodiscard]] PSDFactor psd_factor(const Eigen::MatrixXd& S);
[[nodiscard]] PSDFactor psd_factor(const CovMatrix& S);

} // namespace hdboot::gaussian
