#include "hdboot/lasso/lasso.hpp"

#include "hdboot/core/csv.hpp"
#include "hdboot/core/errors.hpp"

#include <cmath>
#include <string>

namespace hdboot::lasso {

RegressionData::RegressionData(Eigen::VectorXd response, DataMatrix design)
    : y(std::move(response)), X(std::move(design)) {
    if (static_cast<std::size_t>(y.size()) != X.n()) {
        throw InvalidDataError("response has length " + std::to_string(y.size()) + " but design has " +
                               std::to_string(X.n()) + " rows");
    }
    if (!y.allFinite()) throw InvalidDataError("response contains non-finite entries");
}

double soft_threshold(double z, double t) {
    if (!(t >= 0.0)) throw ConfigError("soft_threshold: threshold must be >= 0");
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

double objective(const RegressionData& d, const Eigen::VectorXd& beta, double lambda) {
    const Eigen::VectorXd r = d.y - d.X.values() * beta;
    return r.squaredNorm() / static_cast<double>(d.n()) + lambda * beta.lpNorm<1>();
}

namespace {

struct Solver {
    const Eigen::MatrixXd& X;
    const double inv_n;
    const double half_lambda;
    Eigen::VectorXd curvature;
    Eigen::VectorXd beta;
    Eigen::VectorXd residual;

    double update(Eigen::Index j) {
        const double a = curvature[j];
        if (a <= 0.0) return 0.0;
        const double old = beta[j];
        const double z = X.col(j).dot(residual) * inv_n + a * old;
        const double fresh = soft_threshold(z, half_lambda) / a;
        const double change = fresh - old;
        if (change != 0.0) {
            residual.noalias() -= change * X.col(j);
            beta[j] = fresh;
        }
        return std::abs(change);
    }

    double current_objective(double lambda) const {
        return residual.squaredNorm() * inv_n + lambda * beta.lpNorm<1>();
    }
};

} // namespace

LassoFit lasso_fit(const RegressionData& d, double lambda, double tol, std::size_t max_iter) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("lasso_fit: lambda must be a finite nonnegative number");
    }
    if (!(tol > 0.0)) throw ConfigError("lasso_fit: tol must be positive");
    if (max_iter < 1) throw ConfigError("lasso_fit: max_iter must be >= 1");

    const Eigen::MatrixXd& X = d.X.values();
    const Eigen::Index p = X.cols();
    Solver s{X, 1.0 / static_cast<double>(d.n()), 0.5 * lambda,
             X.colwise().squaredNorm().transpose() / static_cast<double>(d.n()), Eigen::VectorXd::Zero(p), d.y};

    LassoFit fit;
    fit.lambda = lambda;
    bool converged = false;
    std::size_t sweeps = 0;
    while (sweeps < max_iter) {
        double full_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) full_change = std::max(full_change, s.update(j));
        ++sweeps;
        fit.objective_trace.push_back(s.current_objective(lambda));
        if (full_change < tol) {
            converged = true;
            break;
        }
        std::vector<Eigen::Index> active;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (s.beta[j] != 0.0) active.push_back(j);
        }
        while (sweeps < max_iter) {
            double change = 0.0;
            for (Eigen::Index j : active) change = std::max(change, s.update(j));
            ++sweeps;
            fit.objective_trace.push_back(s.current_objective(lambda));
            if (change < tol) break;
        }
    }

    fit.beta = s.beta;
    fit.iterations = sweeps;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (fit.beta[j] != 0.0) fit.active_set.push_back(static_cast<std::size_t>(j));
    }
    fit.objective = objective(d, fit.beta, lambda);
    fit.lambda_trace = {lambda};
    if (!converged) {
        throw NonConvergenceError("lasso_fit did not converge in " + std::to_string(max_iter) + " sweeps", fit);
    }
    return fit;
}

double kkt_violation(const RegressionData& d, const Eigen::VectorXd& beta, double lambda) {
    const Eigen::VectorXd r = d.y - d.X.values() * beta;
    // gradient of the smooth part: -(2/n) X^T r
    const Eigen::VectorXd grad = -2.0 * d.X.values().transpose() * r / static_cast<double>(d.n());
    double worst = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        const double v = beta[j] != 0.0 ? std::abs(grad[j] + lambda * (beta[j] > 0 ? 1.0 : -1.0))
                                        : std::max(0.0, std::abs(grad[j]) - lambda);
        worst = std::max(worst, v);
    }
    return worst;
}

RegressionData center(const RegressionData& d) {
    Eigen::VectorXd y = d.y.array() - d.y.mean();
    Eigen::MatrixXd X = d.X.values().rowwise() - d.X.values().colwise().mean();
    return RegressionData(std::move(y), DataMatrix(std::move(X)));
}

RegressionData load_regression_csv(const std::filesystem::path& path) {
    CsvTable t = read_csv(path);
    if (t.values.cols() < 2) {
        throw InvalidDataError("regression CSV needs a response column and at least one covariate");
    }
    Eigen::VectorXd y = t.values.col(0);
    Eigen::MatrixXd X = t.values.rightCols(t.values.cols() - 1);
    return RegressionData(std::move(y), DataMatrix(std::move(X)));
}

} // namespace hdboot::lasso
