#include "hdboot/sim/dgp.hpp"

#include "hdboot/core/errors.hpp"
#include "hdboot/core/rng.hpp"

#include <cmath>
#include <random>

namespace hdboot::sim {

namespace {

// Stream reserved for the fixed figure1 design.
constexpr std::uint64_t kDesignStream = 0xF16E1ULL;

} // namespace

std::string to_string(DgpKind kind) {
    switch (kind) {
    case DgpKind::Figure1Regression: return "figure1-regression";
    case DgpKind::GaussianEquicorrelated: return "gaussian-equicorrelated";
    case DgpKind::HeavyTailT: return "heavy-tail-t";
    case DgpKind::DuplicatedCoordinates: return "duplicated-coordinates";
    case DgpKind::VarianceDecay: return "variance-decay";
    }
    return "unknown";
}

DgpKind parse_dgp(std::string_view name) {
    for (auto k : {DgpKind::Figure1Regression, DgpKind::GaussianEquicorrelated, DgpKind::HeavyTailT,
                   DgpKind::DuplicatedCoordinates, DgpKind::VarianceDecay}) {
        if (name == to_string(k)) return k;
    }
    throw ConfigError("unknown dgp '" + std::string(name) + "'");
}

void DgpSpec::validate() const {
    switch (kind) {
    case DgpKind::GaussianEquicorrelated:
        if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho must lie in [0, 1]");
        break;
    case DgpKind::HeavyTailT:
        if (!(df > 2.0)) throw ConfigError("df must exceed 2 for a finite variance");
        break;
    case DgpKind::DuplicatedCoordinates:
        if (k < 1) throw ConfigError("k must be >= 1");
        break;
    case DgpKind::VarianceDecay:
        if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("a must be finite and >= 0");
        break;
    case DgpKind::Figure1Regression:
        if (epsilon_override && !std::isfinite(*epsilon_override)) throw ConfigError("epsilon override must be finite");
        break;
    }
}

Generator::Generator(DgpSpec spec, std::size_t n, std::size_t p, std::uint64_t scenario_seed)
    : spec_(std::move(spec)), n_(n), p_(p) {
    spec_.validate();
    if (n < 2 || p < 1) throw ConfigError("generator needs n >= 2 and p >= 1");
    if (spec_.kind == DgpKind::Figure1Regression) {
        Engine rng = make_engine(scenario_seed, kDesignStream);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        z_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
        for (Eigen::Index j = 0; j < z_.cols(); ++j) {
            for (Eigen::Index i = 0; i < z_.rows(); ++i) z_(i, j) = unif(rng);
        }
    }
}

Eigen::MatrixXd Generator::draw_matrix(std::uint64_t seed) const {
    const auto n = static_cast<Eigen::Index>(n_);
    const auto p = static_cast<Eigen::Index>(p_);
    Engine rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd X(n, p);

    switch (spec_.kind) {
    case DgpKind::Figure1Regression: {
        std::exponential_distribution<double> expo(1.0);
        Eigen::VectorXd eps(n);
        for (Eigen::Index i = 0; i < n; ++i) eps[i] = spec_.epsilon_override ? *spec_.epsilon_override : expo(rng) - 1.0;
        X = eps.asDiagonal() * z_;
        break;
    }
    case DgpKind::GaussianEquicorrelated: {
        const double common = std::sqrt(spec_.rho);
        const double own = std::sqrt(1.0 - spec_.rho);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double g = normal(rng);
            for (Eigen::Index j = 0; j < p; ++j) X(i, j) = common * g + own * normal(rng);
        }
        break;
    }
    case DgpKind::HeavyTailT: {
        std::student_t_distribution<double> t(spec_.df);
        const double scale = std::sqrt((spec_.df - 2.0) / spec_.df);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) X(i, j) = scale * t(rng);
        }
        break;
    }
    case DgpKind::DuplicatedCoordinates: {
        const auto k = static_cast<Eigen::Index>(spec_.k);
        Eigen::VectorXd base(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (auto& b : base) b = normal(rng);
            for (Eigen::Index j = 0; j < p; ++j) X(i, j) = base[j % k];
        }
        break;
    }
    case DgpKind::VarianceDecay: {
        Eigen::VectorXd sd(p);
        for (Eigen::Index j = 0; j < p; ++j) sd[j] = std::pow(static_cast<double>(j + 1), -spec_.a / 2.0);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) X(i, j) = sd[j] * normal(rng);
        }
        break;
    }
    }
    return X;
}

CovMatrix Generator::population_covariance() const {
    const auto p = static_cast<Eigen::Index>(p_);
    Eigen::MatrixXd S(p, p);
    switch (spec_.kind) {
    case DgpKind::Figure1Regression:
        // Var(eps) = 1, so Cov(S_n) = n^{-1} sum_i z_i z_i^T.
        S = z_.transpose() * z_ / static_cast<double>(n_);
        if (spec_.epsilon_override) S.setZero();
        break;
    case DgpKind::GaussianEquicorrelated:
        S.setConstant(spec_.rho);
        S.diagonal().setOnes();
        break;
    case DgpKind::HeavyTailT:
        S.setIdentity();
        break;
    case DgpKind::DuplicatedCoordinates: {
        const auto k = static_cast<Eigen::Index>(spec_.k);
        for (Eigen::Index j = 0; j < p; ++j) {
            for (Eigen::Index l = 0; l < p; ++l) S(j, l) = (j % k == l % k) ? 1.0 : 0.0;
        }
        break;
    }
    case DgpKind::VarianceDecay:
        S.setZero();
        for (Eigen::Index j = 0; j < p; ++j) S(j, j) = std::pow(static_cast<double>(j + 1), -spec_.a);
        break;
    }
    return CovMatrix::trusted(std::move(S));
}

} // namespace hdboot::sim
