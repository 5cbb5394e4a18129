#pragma once

#include "hdboot/core/data_matrix.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace hdboot::lasso {

/// Response y (length n) and design X (n x p), rows are observations.
struct RegressionData {
    Eigen::VectorXd y;
    DataMatrix X;

    RegressionData(Eigen::VectorXd response, DataMatrix design);

    [[nodiscard]] std::size_t n() const noexcept { return X.n(); }
    [[nodiscard]] std::size_t p() const noexcept { return X.p(); }
};

struct LassoFit {
    Eigen::VectorXd beta;
    double lambda = 0.0;
    std::vector<std::size_t> active_set;
    double objective = 0.0;
    std::size_t iterations = 0;
    /// Objective after every full or active-set sweep.
    std::vector<double> objective_trace;
    /// Penalty levels visited by rlasso_pipeline, last entry = lambda.
    std::vector<double> lambda_trace;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, LassoFit last) : std::runtime_error(what), last_(std::move(last)) {}
    [[nodiscard]] const LassoFit& last_iterate() const noexcept { return last_; }

private:
    LassoFit last_;
};

inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr std::size_t kDefaultMaxIter = 10000;

/// sign(z) * max(|z| - t, 0).
[[nodiscard]] double soft_threshold(double z, double t);

/// (1/n) ||y - X beta||^2 + lambda ||beta||_1.
[[nodiscard]] double objective(const RegressionData& d, const Eigen::VectorXd& beta, double lambda);

/**
 * Minimizes (1/n) sum_i (y_i - x_i^T beta)^2 + lambda sum_j |beta_j| by cyclic
 * coordinate descent.
 *
 * With a_j = n^{-1} sum_i x_ij^2 and z_j the partial-residual correlation
 * n^{-1} sum_i x_ij (y_i - sum_{k != j} x_ik beta_k), the exact coordinate
 * minimizer is soft_threshold(z_j, lambda / 2) / a_j; on normalized columns
 * (a_j = 1) this is the plain soft-threshold step. Sweeps alternate between
 * all coordinates and the current active set. Convergence is declared only
 * after a full sweep whose largest coefficient change is below tol.
 *
 * Coordinates are visited in index order, so results depend on column order
 * only through floating-point rounding.
 */
[[nodiscard]] LassoFit lasso_fit(const RegressionData& d, double lambda, double tol = kDefaultTolerance,
                                 std::size_t max_iter = kDefaultMaxIter);

/// Largest KKT violation of beta: |grad_j + lambda sign(beta_j)| on the support, (|grad_j| - lambda)_+ off it.
[[nodiscard]] double kkt_violation(const RegressionData& d, const Eigen::VectorXd& beta, double lambda);

/// Subtracts the mean of y and of every design column.
[[nodiscard]] RegressionData center(const RegressionData& d);

/// CSV with a header row; first column is y, the rest is the design.
[[nodiscard]] RegressionData load_regression_csv(const std::filesystem::path& path);

} // namespace hdboot::lasso
