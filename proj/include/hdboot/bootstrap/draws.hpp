#pragma once

#include "hdboot/core/data_matrix.hpp"
#include "hdboot/core/stats.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace hdboot::bootstrap {

enum class Scheme { GaussianMultiplier, Empirical, MammenMultiplier, RademacherMultiplier };

[[nodiscard]] std::string to_string(Scheme scheme);
/// Accepts "gaussian-multiplier", "empirical", "mammen-multiplier", "rademacher-multiplier".
[[nodiscard]] Scheme parse_scheme(std::string_view name);
[[nodiscard]] bool is_multiplier(Scheme scheme) noexcept;

/// B replicates of S_n^B, one per row. `reduced` marks B x 1 max-statistic draws.
struct BootstrapDraws {
    Eigen::MatrixXd replicates;
    Scheme scheme = Scheme::GaussianMultiplier;
    std::uint64_t seed = 0;
    std::size_t B = 0;
    bool reduced = false;
};

struct QuantileEstimate {
    double level = 0.0;
    double value = 0.0;
    std::size_t B = 0;
};

/// Mammen's two-point law: atoms (1 -/+ sqrt5)/2 with P(low atom) = (1 + sqrt5) / (2 sqrt5).
inline constexpr double kMammenLow = -0.61803398874989484820;
inline constexpr double kMammenHigh = 1.61803398874989484820;
inline constexpr double kMammenLowProb = 0.72360679774997896964;

/// n i.i.d. mean-zero unit-variance weights drawn from Engine(seed). Empirical scheme throws ConfigError.
[[nodiscard]] Eigen::VectorXd gen_weights(Scheme scheme, std::size_t n, std::uint64_t seed);

/// Multinomial resampling counts for one empirical-bootstrap replicate; entries sum to n.
[[nodiscard]] Eigen::VectorXd resample_counts(std::size_t n, std::uint64_t seed);

/**
 * B x n weight matrix; row b comes from stream_seed(seed, b).
 *
 * Multiplier schemes give gen_weights rows. The empirical scheme gives
 * resampling counts: sum_i (X*_i - Xbar) = sum_k c_k (X_k - Xbar), so both
 * bootstraps reduce to the same weighted sum of centered rows.
 */
[[nodiscard]] Eigen::MatrixXd weight_matrix(Scheme scheme, std::size_t n, std::size_t B, std::uint64_t seed);

/// n^{-1/2} * weights * centered, i.e. one replicate per weight row.
[[nodiscard]] Eigen::MatrixXd weighted_replicates(const Eigen::MatrixXd& centered_rows, const Eigen::MatrixXd& weights);

/// S_n^B = n^{-1/2} sum_i xi_i (X_i - Xbar).
[[nodiscard]] BootstrapDraws multiplier_draws(const DataMatrix& X, Scheme scheme, std::size_t B, std::uint64_t seed);

/// S_n^B = n^{-1/2} sum_i (X*_i - Xbar), rows resampled with replacement. No recentring at the resample mean.
[[nodiscard]] BootstrapDraws empirical_draws(const DataMatrix& X, std::size_t B, std::uint64_t seed);

/// Dispatches to multiplier_draws or empirical_draws.
[[nodiscard]] BootstrapDraws draws(const DataMatrix& X, Scheme scheme, std::size_t B, std::uint64_t seed);

/// Lambda-hat^{-1/2} S_n^B with Lambda-hat the diagonal of the empirical covariance of X.
[[nodiscard]] BootstrapDraws studentized_draws(const DataMatrix& X, Scheme scheme, std::size_t B, std::uint64_t seed);

/// Collapses each replicate to its max-statistic.
[[nodiscard]] BootstrapDraws reduce(const BootstrapDraws& d, MaxMode mode);

/// Rank ceil(level * B) used by every quantile in the library, clamped to [1, B].
[[nodiscard]] std::size_t quantile_rank(double level, std::size_t B);

/// ceil(level * B)-th order statistic of values.
[[nodiscard]] double order_statistic_quantile(std::span<const double> values, double level);

/// Conditional quantile of reduced draws. Throws on vector-valued replicates.
[[nodiscard]] QuantileEstimate conditional_quantile(const BootstrapDraws& d, double level);

} // namespace hdboot::bootstrap
