#pragma once

#include "hdboot/bootstrap/draws.hpp"
#include "hdboot/core/data_matrix.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hdboot::inference {

/// Estimated influence values psi_hat (n x p) of an asymptotically linear estimator theta_hat.
class InfluencePanel {
public:
    InfluencePanel(Eigen::MatrixXd psi_hat, Eigen::VectorXd theta_hat);

    [[nodiscard]] const Eigen::MatrixXd& psi_hat() const noexcept { return psi_; }
    [[nodiscard]] const Eigen::VectorXd& theta_hat() const noexcept { return theta_; }
    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(psi_.rows()); }
    [[nodiscard]] std::size_t p() const noexcept { return static_cast<std::size_t>(psi_.cols()); }

    /// Sigma-hat_jj^{1/2} from the centered influence values (1/n normalization).
    [[nodiscard]] Eigen::VectorXd sd() const;

    /// sqrt(n) theta_hat_j / Sigma-hat_jj^{1/2}.
    [[nodiscard]] Eigen::VectorXd t_statistics() const;

    /// Panel restricted to the listed columns, in the given order.
    [[nodiscard]] InfluencePanel columns(const std::vector<std::size_t>& idx) const;

private:
    Eigen::MatrixXd psi_;
    Eigen::VectorXd theta_;
};

/// Sample-mean panel: psi_hat = X, theta_hat = column means.
[[nodiscard]] InfluencePanel mean_panel(const DataMatrix& X);

/// [psi, -psi] with theta [theta, -theta]: splits each two-sided hypothesis into two one-sided ones.
[[nodiscard]] InfluencePanel doubled(const InfluencePanel& panel);

/**
 * Randomized-trial panel with psi_ij = D_i Y_ij / gamma - (1 - D_i) Y_ij / (1 - gamma).
 * D must be 0/1 and 0 < gamma < 1.
 */
[[nodiscard]] InfluencePanel ate_influence(const Eigen::VectorXd& D, const DataMatrix& Y, double gamma);

/// Studentized bootstrap draws of n^{-1/2} sum_i xi_i (psi_hat_i - mean psi_hat).
[[nodiscard]] bootstrap::BootstrapDraws influence_bootstrap(const InfluencePanel& panel, bootstrap::Scheme scheme,
                                                            std::size_t B, std::uint64_t seed);

} // namespace hdboot::inference
