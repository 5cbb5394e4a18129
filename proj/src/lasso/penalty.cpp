#include "hdboot/lasso/penalty.hpp"

#include "hdboot/bootstrap/draws.hpp"
#include "hdboot/core/errors.hpp"

#include <cmath>
#include <span>
#include <string>

namespace hdboot::lasso {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

/// (1 - alpha)-quantile of max_j |n^{-1} (W A)_bj| over the B rows of W.
double max_score_quantile(const Eigen::MatrixXd& A, double alpha, std::size_t B, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(A.rows());
    const Eigen::MatrixXd W = bootstrap::weight_matrix(bootstrap::Scheme::GaussianMultiplier, n, B, seed);
    Eigen::MatrixXd scores;
    scores.noalias() = W * A;
    const Eigen::VectorXd m = scores.cwiseAbs().rowwise().maxCoeff() / static_cast<double>(n);
    return bootstrap::order_statistic_quantile(std::span<const double>(m.data(), B), 1.0 - alpha);
}

} // namespace

double penalty_homoscedastic(const DataMatrix& X, double sigma, double alpha, std::size_t B, std::uint64_t seed) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("penalty_homoscedastic: sigma must be > 0");
    check_alpha(alpha);
    return 2.0 * sigma * max_score_quantile(X.values(), alpha, B, seed);
}

double penalty_heteroscedastic(const DataMatrix& X, const Eigen::VectorXd& residuals, double alpha, std::size_t B,
                               std::uint64_t seed) {
    check_alpha(alpha);
    if (static_cast<std::size_t>(residuals.size()) != X.n()) {
        throw InvalidDataError("residuals have length " + std::to_string(residuals.size()) + ", design has " +
                               std::to_string(X.n()) + " rows");
    }
    if (!residuals.allFinite()) throw InvalidDataError("residuals contain non-finite entries");
    if (residuals.cwiseAbs().maxCoeff() == 0.0) {
        throw InvalidDataError("penalty_heteroscedastic: all residuals are zero");
    }
    const Eigen::MatrixXd weighted = residuals.asDiagonal() * X.values();
    return 2.0 * max_score_quantile(weighted, alpha, B, seed);
}

NoiseModel parse_noise_model(std::string_view name) {
    if (name == "homoscedastic") return NoiseModel::Homoscedastic;
    if (name == "heteroscedastic") return NoiseModel::Heteroscedastic;
    throw ConfigError("unknown noise model '" + std::string(name) + "'");
}

LassoFit rlasso_pipeline(const RegressionData& d, const RlassoOptions& opts) {
    check_alpha(opts.alpha);
    if (opts.refinements < 1) throw ConfigError("rlasso_pipeline: refinements must be >= 1");

    const auto n = static_cast<double>(d.n());
    Eigen::VectorXd scale = (d.X.values().colwise().squaredNorm().transpose() / n).cwiseSqrt();
    for (auto& s : scale) {
        if (s == 0.0) s = 1.0; // all-zero column stays zero and gets beta = 0
    }
    const RegressionData normalized(d.y, DataMatrix(d.X.values() * scale.cwiseInverse().asDiagonal()));

    const double y_sd = std::sqrt((d.y.array() - d.y.mean()).square().sum() / (n - 1.0));
    if (!(y_sd > 0.0)) throw InvalidDataError("rlasso_pipeline: response is constant");

    double lambda = penalty_homoscedastic(normalized.X, y_sd, opts.alpha, opts.B, opts.seed);
    std::vector<double> trace{lambda};
    for (std::size_t r = 0; r < opts.refinements; ++r) {
        const LassoFit pilot = lasso_fit(normalized, lambda, opts.tol, opts.max_iter);
        const Eigen::VectorXd resid = normalized.y - normalized.X.values() * pilot.beta;
        if (opts.mode == NoiseModel::Heteroscedastic) {
            lambda = penalty_heteroscedastic(normalized.X, resid, opts.alpha, opts.B, opts.seed);
        } else {
            const double sigma = std::sqrt(resid.squaredNorm() / n);
            if (!(sigma > 0.0)) throw InvalidDataError("rlasso_pipeline: pilot fit interpolates the data");
            lambda = penalty_homoscedastic(normalized.X, sigma, opts.alpha, opts.B, opts.seed);
        }
        trace.push_back(lambda);
    }

    LassoFit fit = lasso_fit(normalized, lambda, opts.tol, opts.max_iter);
    fit.beta = fit.beta.cwiseQuotient(scale);
    fit.lambda_trace = std::move(trace);
    return fit;
}

SupScoreResult sup_score_test(const RegressionData& d, double alpha, std::size_t B, std::uint64_t seed) {
    check_alpha(alpha);
    const Eigen::VectorXd score = d.X.values().transpose() * d.y / static_cast<double>(d.n());
    SupScoreResult res;
    res.statistic = 2.0 * score.cwiseAbs().maxCoeff();
    if (d.y.cwiseAbs().maxCoeff() == 0.0) {
        // y == 0: the statistic is 0 and the bootstrap law is a point mass at 0.
        return res;
    }
    res.critical_value = penalty_heteroscedastic(d.X, d.y, alpha, B, seed);
    res.reject = res.statistic > res.critical_value;
    return res;
}

} // namespace hdboot::lasso
