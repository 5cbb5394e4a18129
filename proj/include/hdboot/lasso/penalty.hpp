#pragma once

#include "hdboot/core/data_matrix.hpp"
#include "hdboot/lasso/lasso.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace hdboot::lasso {

/// (1 - alpha)-quantile over B draws of 2 sigma max_j |n^{-1} sum_i x_ij xi_i|, xi_i i.i.d. N(0,1).
[[nodiscard]] double penalty_homoscedastic(const DataMatrix& X, double sigma, double alpha, std::size_t B,
                                           std::uint64_t seed);

/// Conditional (1 - alpha)-quantile of 2 max_j |n^{-1} sum_i x_ij e_i xi_i| given residuals e.
[[nodiscard]] double penalty_heteroscedastic(const DataMatrix& X, const Eigen::VectorXd& residuals, double alpha,
                                             std::size_t B, std::uint64_t seed);

enum class NoiseModel { Homoscedastic, Heteroscedastic };

[[nodiscard]] NoiseModel parse_noise_model(std::string_view name);

struct RlassoOptions {
    double alpha = 0.1;
    NoiseModel mode = NoiseModel::Heteroscedastic;
    std::size_t refinements = 2;
    std::size_t B = 999;
    std::uint64_t seed = 0;
    double tol = kDefaultTolerance;
    std::size_t max_iter = kDefaultMaxIter;
};

/**
 * Lasso with a bootstrap-selected penalty.
 *
 * Columns are scaled to n^{-1} sum_i x_ij^2 = 1 first. The crude penalty is
 * penalty_homoscedastic with sigma set to the sample standard deviation of y.
 * Each refinement fits the Lasso, recomputes residuals (or their RMS in the
 * homoscedastic mode) and re-selects the penalty; the returned fit uses the
 * last penalty. Coefficients are mapped back to the original column scale,
 * and `objective` is the objective of the normalized problem. Every penalty
 * draw shares `seed`.
 */
[[nodiscard]] LassoFit rlasso_pipeline(const RegressionData& d, const RlassoOptions& opts);

struct SupScoreResult {
    double statistic = 0.0;
    double critical_value = 0.0;
    bool reject = false;
};

/// Tests beta* = 0 with statistic 2 max_j |n^{-1} sum_i x_ij y_i| against penalty_heteroscedastic(X, y).
[[nodiscard]] SupScoreResult sup_score_test(const RegressionData& d, double alpha, std::size_t B, std::uint64_t seed);

} // namespace hdboot::lasso
