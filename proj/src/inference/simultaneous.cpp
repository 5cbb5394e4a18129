#include "hdboot/inference/simultaneous.hpp"

#include "hdboot/core/errors.hpp"
#include "hdboot/core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hdboot::inference {

namespace {

void check_level(double a, const char* name) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1)");
}

} // namespace

Interval SimultaneousCI::interval(std::size_t j) const {
    if (j >= static_cast<std::size_t>(lower.size())) {
        throw InvalidDataError("interval index " + std::to_string(j) + " out of range");
    }
    return {lower[static_cast<Eigen::Index>(j)], upper[static_cast<Eigen::Index>(j)]};
}

bool SimultaneousCI::contains(const Eigen::VectorXd& theta) const {
    if (theta.size() != lower.size()) throw InvalidDataError("parameter dimension does not match the rectangle");
    return ((theta.array() >= lower.array()) && (theta.array() <= upper.array())).all();
}

SimultaneousCI ci_from_quantile(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& sd, std::size_t n,
                                const bootstrap::QuantileEstimate& q) {
    const Eigen::VectorXd half = sd * (q.value / std::sqrt(static_cast<double>(n)));
    return {theta_hat - half, theta_hat + half, q.level, q};
}

SimultaneousCI simultaneous_ci(const InfluencePanel& panel, double alpha, bootstrap::Scheme scheme, std::size_t B,
                               std::uint64_t seed) {
    check_level(alpha, "alpha");
    const auto d = bootstrap::reduce(influence_bootstrap(panel, scheme, B, seed), MaxMode::MaxAbs);
    return ci_from_quantile(panel.theta_hat(), panel.sd(), panel.n(), bootstrap::conditional_quantile(d, 1.0 - alpha));
}

Interval post_selection_ci(const InfluencePanel& panel, double alpha, std::size_t j_hat, bootstrap::Scheme scheme,
                           std::size_t B, std::uint64_t seed) {
    if (j_hat >= panel.p()) {
        throw ConfigError("selected index " + std::to_string(j_hat) + " out of range for p = " +
                          std::to_string(panel.p()));
    }
    return simultaneous_ci(panel, alpha, scheme, B, seed).interval(j_hat);
}

double precision_corrected_max(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& sd, std::size_t n, double k) {
    return (theta_hat - sd * (k / std::sqrt(static_cast<double>(n)))).maxCoeff();
}

std::vector<std::size_t> best_policy_from_quantile(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& se,
                                                   double q) {
    const double best_lower = (theta_hat - q * se).maxCoeff();
    std::vector<std::size_t> out;
    for (Eigen::Index j = 0; j < theta_hat.size(); ++j) {
        if (theta_hat[j] + q * se[j] >= best_lower) out.push_back(static_cast<std::size_t>(j));
    }
    return out;
}

std::vector<std::size_t> best_policy_set(const InfluencePanel& panel, double beta, bootstrap::Scheme scheme,
                                         std::size_t B, std::uint64_t seed) {
    check_level(beta, "beta");
    const auto d = bootstrap::reduce(influence_bootstrap(panel, scheme, B, seed), MaxMode::MaxAbs);
    const double q = bootstrap::conditional_quantile(d, 1.0 - beta).value;
    return best_policy_from_quantile(panel.theta_hat(), panel.sd() / std::sqrt(static_cast<double>(panel.n())), q);
}

MaxEffectResult max_effect_lower(const InfluencePanel& panel, double alpha, bootstrap::Scheme scheme, std::size_t B,
                                 std::uint64_t seed, std::optional<double> preselect_beta) {
    check_level(alpha, "alpha");
    MaxEffectResult res;
    if (preselect_beta) {
        res.considered = best_policy_set(panel, *preselect_beta, scheme, B, seed);
    } else {
        res.considered.resize(panel.p());
        for (std::size_t j = 0; j < panel.p(); ++j) res.considered[j] = j;
    }
    const InfluencePanel sub = res.considered.size() == panel.p() ? panel : panel.columns(res.considered);
    const auto d = bootstrap::reduce(influence_bootstrap(sub, scheme, B, seed), MaxMode::Max);
    res.k = bootstrap::conditional_quantile(d, 1.0 - alpha);
    res.estimate = precision_corrected_max(sub.theta_hat(), sub.sd(), sub.n(), res.k.value);
    return res;
}

} // namespace hdboot::inference
