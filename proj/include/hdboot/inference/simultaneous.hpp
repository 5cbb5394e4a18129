#pragma once

#include "hdboot/bootstrap/draws.hpp"
#include "hdboot/inference/panel.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace hdboot::inference {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Confidence rectangle prod_j [lower_j, upper_j].
struct SimultaneousCI {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    double level = 0.0;
    bootstrap::QuantileEstimate quantile_used;

    [[nodiscard]] Interval interval(std::size_t j) const;
    [[nodiscard]] bool contains(const Eigen::VectorXd& theta) const;
};

/// theta_hat_j -/+ sd_j * q / sqrt(n).
[[nodiscard]] SimultaneousCI ci_from_quantile(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& sd,
                                              std::size_t n, const bootstrap::QuantileEstimate& q);

/// Rectangle from the (1 - alpha)-quantile of the max-abs studentized bootstrap draw.
[[nodiscard]] SimultaneousCI simultaneous_ci(const InfluencePanel& panel, double alpha, bootstrap::Scheme scheme,
                                             std::size_t B, std::uint64_t seed);

/// The j_hat-th side of simultaneous_ci; valid however j_hat was chosen.
[[nodiscard]] Interval post_selection_ci(const InfluencePanel& panel, double alpha, std::size_t j_hat,
                                         bootstrap::Scheme scheme, std::size_t B, std::uint64_t seed);

/// max_j [theta_hat_j - k * sd_j / sqrt(n)].
[[nodiscard]] double precision_corrected_max(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& sd,
                                             std::size_t n, double k);

struct MaxEffectResult {
    /// Precision-corrected estimate; also the lower end of the one-sided interval [estimate, inf).
    double estimate = 0.0;
    bootstrap::QuantileEstimate k;
    /// Coordinates the maximum ranged over (all of them unless preselection was requested).
    std::vector<std::size_t> considered;
};

/**
 * Precision-corrected estimator of max_j theta*_j with k the (1 - alpha)-quantile
 * of the one-sided max of the studentized draws.
 *
 * With `preselect_beta`, the maximum and the quantile are taken over
 * best_policy_set(panel, *preselect_beta) only, drawn with the same seed.
 */
[[nodiscard]] MaxEffectResult max_effect_lower(const InfluencePanel& panel, double alpha, bootstrap::Scheme scheme,
                                               std::size_t B, std::uint64_t seed,
                                               std::optional<double> preselect_beta = std::nullopt);

/// { j : theta_j + q se_j >= max_k (theta_k - q se_k) } with se = sd / sqrt(n).
[[nodiscard]] std::vector<std::size_t> best_policy_from_quantile(const Eigen::VectorXd& theta_hat,
                                                                 const Eigen::VectorXd& se, double q);

/// Set of plausibly best coordinates; q is the (1 - beta)-quantile of the max-abs studentized draw.
[[nodiscard]] std::vector<std::size_t> best_policy_set(const InfluencePanel& panel, double beta,
                                                       bootstrap::Scheme scheme, std::size_t B, std::uint64_t seed);

} // namespace hdboot::inference
