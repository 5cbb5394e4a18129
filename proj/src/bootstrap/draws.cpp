#include "hdboot/bootstrap/draws.hpp"

#include "hdboot/core/errors.hpp"
#include "hdboot/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace hdboot::bootstrap {

std::string to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::GaussianMultiplier: return "gaussian-multiplier";
    case Scheme::Empirical: return "empirical";
    case Scheme::MammenMultiplier: return "mammen-multiplier";
    case Scheme::RademacherMultiplier: return "rademacher-multiplier";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "gaussian-multiplier" || name == "gaussian" || name == "multiplier") return Scheme::GaussianMultiplier;
    if (name == "empirical") return Scheme::Empirical;
    if (name == "mammen-multiplier" || name == "mammen") return Scheme::MammenMultiplier;
    if (name == "rademacher-multiplier" || name == "rademacher") return Scheme::RademacherMultiplier;
    throw ConfigError("unknown bootstrap scheme '" + std::string(name) + "'");
}

bool is_multiplier(Scheme scheme) noexcept { return scheme != Scheme::Empirical; }

namespace {

void check_B(std::size_t B) {
    if (B < 1) throw ConfigError("number of bootstrap replicates B must be >= 1");
}

} // namespace

Eigen::VectorXd gen_weights(Scheme scheme, std::size_t n, std::uint64_t seed) {
    Engine rng(seed);
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    switch (scheme) {
    case Scheme::GaussianMultiplier: {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (auto& x : w) x = normal(rng);
        break;
    }
    case Scheme::MammenMultiplier: {
        std::bernoulli_distribution low(kMammenLowProb);
        for (auto& x : w) x = low(rng) ? kMammenLow : kMammenHigh;
        break;
    }
    case Scheme::RademacherMultiplier: {
        std::bernoulli_distribution coin(0.5);
        for (auto& x : w) x = coin(rng) ? 1.0 : -1.0;
        break;
    }
    case Scheme::Empirical:
        throw ConfigError("gen_weights: the empirical bootstrap has no multiplier weights");
    }
    return w;
}

Eigen::VectorXd resample_counts(std::size_t n, std::uint64_t seed) {
    Engine rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) c[static_cast<Eigen::Index>(pick(rng))] += 1.0;
    return c;
}

Eigen::MatrixXd weight_matrix(Scheme scheme, std::size_t n, std::size_t B, std::uint64_t seed) {
    check_B(B);
    Eigen::MatrixXd W(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(n));
    for (std::size_t b = 0; b < B; ++b) {
        const auto s = stream_seed(seed, b);
        W.row(static_cast<Eigen::Index>(b)) =
            (scheme == Scheme::Empirical ? resample_counts(n, s) : gen_weights(scheme, n, s)).transpose();
    }
    return W;
}

Eigen::MatrixXd weighted_replicates(const Eigen::MatrixXd& centered_rows, const Eigen::MatrixXd& weights) {
    if (weights.cols() != centered_rows.rows()) {
        throw InvalidDataError("weight matrix has " + std::to_string(weights.cols()) + " columns, data has " +
                               std::to_string(centered_rows.rows()) + " rows");
    }
    Eigen::MatrixXd out;
    out.noalias() = weights * centered_rows;
    out /= std::sqrt(static_cast<double>(centered_rows.rows()));
    return out;
}

BootstrapDraws multiplier_draws(const DataMatrix& X, Scheme scheme, std::size_t B, std::uint64_t seed) {
    if (!is_multiplier(scheme)) {
        throw ConfigError("multiplier_draws called with the empirical scheme");
    }
    check_B(B);
    return {weighted_replicates(centered(X), weight_matrix(scheme, X.n(), B, seed)), scheme, seed, B, false};
}

BootstrapDraws empirical_draws(const DataMatrix& X, std::size_t B, std::uint64_t seed) {
    check_B(B);
    return {weighted_replicates(centered(X), weight_matrix(Scheme::Empirical, X.n(), B, seed)), Scheme::Empirical,
            seed, B, false};
}

BootstrapDraws draws(const DataMatrix& X, Scheme scheme, std::size_t B, std::uint64_t seed) {
    return is_multiplier(scheme) ? multiplier_draws(X, scheme, B, seed) : empirical_draws(X, B, seed);
}

BootstrapDraws studentized_draws(const DataMatrix& X, Scheme scheme, std::size_t B, std::uint64_t seed) {
    const Eigen::VectorXd var = column_variances(X);
    for (Eigen::Index j = 0; j < var.size(); ++j) {
        if (!(var[j] > 0.0)) {
            throw DegenerateCoordinateError(static_cast<std::size_t>(j),
                                            "column " + std::to_string(j) + " has zero empirical variance");
        }
    }
    BootstrapDraws d = draws(X, scheme, B, seed);
    d.replicates = d.replicates * var.cwiseSqrt().cwiseInverse().asDiagonal();
    return d;
}

BootstrapDraws reduce(const BootstrapDraws& d, MaxMode mode) {
    if (d.reduced) return d;
    return {row_max_stat(d.replicates, mode), d.scheme, d.seed, d.B, true};
}

std::size_t quantile_rank(double level, std::size_t B) {
    if (!(level > 0.0 && level < 1.0)) {
        throw ConfigError("quantile level must lie in (0, 1), got " + std::to_string(level));
    }
    check_B(B);
    // The 1e-9 guard keeps exact products such as 0.9 * 10 from rounding up a rank.
    const double raw = std::ceil(level * static_cast<double>(B) - 1e-9);
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, B);
}

double order_statistic_quantile(std::span<const double> values, double level) {
    if (values.empty()) throw InvalidDataError("quantile of an empty sample");
    const std::size_t k = quantile_rank(level, values.size());
    std::vector<double> v(values.begin(), values.end());
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
    return v[k - 1];
}

QuantileEstimate conditional_quantile(const BootstrapDraws& d, double level) {
    if (!d.reduced || d.replicates.cols() != 1) {
        throw InvalidDataError("conditional_quantile needs scalar replicates; reduce by a max-statistic first");
    }
    const auto& col = d.replicates;
    const double q = order_statistic_quantile(std::span<const double>(col.data(), static_cast<std::size_t>(col.rows())), level);
    return {level, q, static_cast<std::size_t>(col.rows())};
}

} // namespace hdboot::bootstrap
