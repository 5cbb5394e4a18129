#pragma once

#include "hdboot/bootstrap/draws.hpp"
#include "hdboot/inference/panel.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

namespace hdboot::inference {

enum class Sides { OneSided, TwoSided };

struct StepdownStep {
    std::vector<std::size_t> active;
    double critical_value = 0.0;
    std::vector<std::size_t> rejected;
};

/**
 * Outcome of the stepdown procedure.
 *
 * `statistics`, `adjusted_p` and `rejection_step` are indexed by the caller's
 * hypotheses; rejection_step[j] is the 1-based step that rejected j, 0 if
 * none did. For two-sided runs `steps` refers to the doubled index set, where
 * k < p tests theta_k <= 0 and k >= p tests -theta_{k-p} <= 0.
 */
struct StepdownResult {
    std::vector<std::size_t> rejected;
    std::vector<StepdownStep> steps;
    Eigen::VectorXd statistics;
    Eigen::VectorXd adjusted_p;
    std::vector<std::size_t> rejection_step;
    std::size_t B = 0;
    /// Set when ceil((1 - alpha) B) = B or every first-step bootstrap maximum is tied.
    bool coarse_quantile = false;
};

/**
 * Stepdown on fixed statistics t (length p) and one shared B x p draw matrix.
 *
 * Step l rejects every surviving j with t_j > c(w(l)), the (1 - alpha)-quantile
 * of max_{j in w(l)} draws_bj; it stops once a step rejects nothing. Adjusted
 * p-values are (1 + running-max exceedance counts) / (B + 1) along the
 * statistic order, where the count for the k-th smallest statistic is
 * #{b : max_{i <= k} draws_b,(i) >= t_(k)}.
 */
[[nodiscard]] StepdownResult stepdown_from_draws(const Eigen::VectorXd& t, const Eigen::MatrixXd& draws, double alpha);

/// Stepdown for H_j : theta_j <= 0 (or theta_j = 0 when two-sided) on an influence panel.
[[nodiscard]] StepdownResult stepdown(const InfluencePanel& panel, double alpha, Sides sides,
                                      bootstrap::Scheme scheme, std::size_t B, std::uint64_t seed);

[[nodiscard]] Sides parse_sides(std::string_view name);

/// CSV with header index,statistic,adjusted_p,rejected,step.
void write_csv(std::ostream& out, const StepdownResult& result);

} // namespace hdboot::inference
