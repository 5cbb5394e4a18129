#include "hdboot/inference/panel.hpp"

#include "hdboot/core/errors.hpp"
#include "hdboot/core/stats.hpp"

#include <cmath>
#include <string>

namespace hdboot::inference {

InfluencePanel::InfluencePanel(Eigen::MatrixXd psi_hat, Eigen::VectorXd theta_hat)
    : psi_(std::move(psi_hat)), theta_(std::move(theta_hat)) {
    if (psi_.rows() < 2) throw InvalidDataError("influence panel needs at least 2 rows");
    if (psi_.cols() < 1) throw InvalidDataError("influence panel needs at least 1 column");
    if (theta_.size() != psi_.cols()) {
        throw InvalidDataError("theta_hat has length " + std::to_string(theta_.size()) + ", panel has " +
                               std::to_string(psi_.cols()) + " columns");
    }
    if (!psi_.allFinite() || !theta_.allFinite()) throw InvalidDataError("influence panel has non-finite entries");
}

Eigen::VectorXd InfluencePanel::sd() const {
    const Eigen::MatrixXd c = psi_.rowwise() - psi_.colwise().mean();
    return (c.colwise().squaredNorm().transpose() / static_cast<double>(n())).cwiseSqrt();
}

Eigen::VectorXd InfluencePanel::t_statistics() const {
    const Eigen::VectorXd s = sd();
    for (Eigen::Index j = 0; j < s.size(); ++j) {
        if (!(s[j] > 0.0)) {
            throw DegenerateCoordinateError(static_cast<std::size_t>(j),
                                            "influence column " + std::to_string(j) + " has zero variance");
        }
    }
    return std::sqrt(static_cast<double>(n())) * theta_.cwiseQuotient(s);
}

InfluencePanel InfluencePanel::columns(const std::vector<std::size_t>& idx) const {
    Eigen::MatrixXd psi(psi_.rows(), static_cast<Eigen::Index>(idx.size()));
    Eigen::VectorXd theta(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= p()) throw InvalidDataError("column index " + std::to_string(idx[k]) + " out of range");
        psi.col(static_cast<Eigen::Index>(k)) = psi_.col(static_cast<Eigen::Index>(idx[k]));
        theta[static_cast<Eigen::Index>(k)] = theta_[static_cast<Eigen::Index>(idx[k])];
    }
    return InfluencePanel(std::move(psi), std::move(theta));
}

InfluencePanel mean_panel(const DataMatrix& X) { return InfluencePanel(X.values(), column_means(X)); }

InfluencePanel doubled(const InfluencePanel& panel) {
    const Eigen::Index p = panel.psi_hat().cols();
    Eigen::MatrixXd psi(panel.psi_hat().rows(), 2 * p);
    psi << panel.psi_hat(), -panel.psi_hat();
    Eigen::VectorXd theta(2 * p);
    theta << panel.theta_hat(), -panel.theta_hat();
    return InfluencePanel(std::move(psi), std::move(theta));
}

InfluencePanel ate_influence(const Eigen::VectorXd& D, const DataMatrix& Y, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("treatment probability gamma must lie in (0, 1)");
    if (static_cast<std::size_t>(D.size()) != Y.n()) {
        throw InvalidDataError("treatment vector length does not match the number of outcome rows");
    }
    for (Eigen::Index i = 0; i < D.size(); ++i) {
        if (D[i] != 0.0 && D[i] != 1.0) {
            throw InvalidDataError("treatment indicator at row " + std::to_string(i) + " is not 0/1");
        }
    }
    const Eigen::VectorXd w = D.array() / gamma - (1.0 - D.array()) / (1.0 - gamma);
    Eigen::MatrixXd psi = w.asDiagonal() * Y.values();
    Eigen::VectorXd theta = psi.colwise().mean().transpose();
    return InfluencePanel(std::move(psi), std::move(theta));
}

bootstrap::BootstrapDraws influence_bootstrap(const InfluencePanel& panel, bootstrap::Scheme scheme, std::size_t B,
                                              std::uint64_t seed) {
    return bootstrap::studentized_draws(DataMatrix(panel.psi_hat()), scheme, B, seed);
}

} // namespace hdboot::inference
