#pragma once

#include "hdboot/core/data_matrix.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

namespace hdboot::inference {

struct CovCompareResult {
    double statistic = 0.0;
    double critical_value = 0.0;
    bool reject = false;
    std::size_t pairs_tested = 0;
    /// max(n, m) / min(n, m) > 4: the samples are far from comparable in size.
    bool unbalanced = false;
};

/**
 * Standardized covariance differences t_jk for j <= k, packed row-major over
 * the upper triangle (0,0), (0,1), ..., (0,p-1), (1,1), ...
 *
 * t_jk = (sigma1_jk - sigma2_jk) / sqrt(s1_jk / n + s2_jk / m), where s is
 * the 1/n variance of the centered cross products. Throws
 * DegeneratePairError when the denominator vanishes.
 */
[[nodiscard]] Eigen::VectorXd cov_compare_tstats(const DataMatrix& X, const DataMatrix& Y);

/**
 * Max-type two-sample test of Sigma_X = Sigma_Y.
 *
 * Each replicate draws one N(0, 1) weight per observation of either sample
 * (n + m in total); the critical value is the (1 - alpha)-quantile of the
 * weighted max statistic.
 */
[[nodiscard]] CovCompareResult cov_compare_test(const DataMatrix& X, const DataMatrix& Y, double alpha,
                                                std::size_t B, std::uint64_t seed);

} // namespace hdboot::inference
