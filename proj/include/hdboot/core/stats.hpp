#pragma once

#include "hdboot/core/data_matrix.hpp"

#include <Eigen/Dense>

#include <span>

namespace hdboot {

enum class MaxMode { Max, MaxAbs };

/// n^{-1/2} times the column sums of X.
[[nodiscard]] Eigen::VectorXd scaled_mean(const DataMatrix& X);

[[nodiscard]] Eigen::VectorXd column_means(const DataMatrix& X);

/// X with column means subtracted.
[[nodiscard]] Eigen::MatrixXd centered(const DataMatrix& X);

/// n^{-1} sum_i (X_i - mean)(X_i - mean)^T. Note the 1/n normalization.
[[nodiscard]] CovMatrix empirical_covariance(const DataMatrix& X);

/// Diagonal of empirical_covariance without forming the p x p matrix.
[[nodiscard]] Eigen::VectorXd column_variances(const DataMatrix& X);

/// v_j / sqrt(diag_j). Throws DegenerateCoordinateError on the first diag_j <= 0.
[[nodiscard]] Eigen::VectorXd studentize(const Eigen::VectorXd& v, const Eigen::VectorXd& diag);

[[nodiscard]] double max_stat(std::span<const double> v, MaxMode mode);
[[nodiscard]] double max_stat(const Eigen::VectorXd& v, MaxMode mode);

/// Row-wise max_stat of an B x p replicate matrix.
[[nodiscard]] Eigen::VectorXd row_max_stat(const Eigen::MatrixXd& rows, MaxMode mode);

/**
 * Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
 *
 * Both ECDFs are right-continuous step functions, so the supremum is attained
 * at a pooled sample point and the result is exact.
 */
[[nodiscard]] double ks_distance(std::span<const double> a, std::span<const double> b);

/// 0.5 * sqrt(1/na + 1/nb): the largest pointwise standard error of an ECDF difference.
[[nodiscard]] double ks_standard_error(std::size_t na, std::size_t nb);

} // namespace hdboot
