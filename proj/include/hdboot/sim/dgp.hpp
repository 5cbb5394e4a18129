#pragma once

#include "hdboot/core/data_matrix.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hdboot::sim {

enum class DgpKind { Figure1Regression, GaussianEquicorrelated, HeavyTailT, DuplicatedCoordinates, VarianceDecay };

[[nodiscard]] std::string to_string(DgpKind kind);
[[nodiscard]] DgpKind parse_dgp(std::string_view name);

struct DgpSpec {
    DgpKind kind = DgpKind::GaussianEquicorrelated;
    double rho = 0.0;         // equicorrelated
    double df = 5.0;          // heavy-tail-t, rescaled to unit variance
    std::size_t k = 1;        // duplicated-coordinates: column j copies base column j mod k
    double a = 1.0;           // variance-decay: Var(X_j) = (j + 1)^{-a}
    /// figure1 only: replace every epsilon_i by this constant (a testing hook).
    std::optional<double> epsilon_override;

    void validate() const;
};

/**
 * Mean-zero data generator for one scenario.
 *
 * figure1-regression: X_ij = z_ij eps_i with eps_i = E_i - 1, E_i ~ Exp(1);
 * z ~ U[0,1] is drawn once from the scenario seed and held fixed across draws.
 * The other kinds are i.i.d. rows with the covariance named by the kind.
 */
class Generator {
public:
    Generator(DgpSpec spec, std::size_t n, std::size_t p, std::uint64_t scenario_seed);

    /// One n x p dataset; equal seeds give equal data.
    [[nodiscard]] Eigen::MatrixXd draw_matrix(std::uint64_t seed) const;
    [[nodiscard]] DataMatrix draw(std::uint64_t seed) const { return DataMatrix(draw_matrix(seed)); }

    /// Covariance of the scaled mean S_n = n^{-1/2} sum_i X_i.
    [[nodiscard]] CovMatrix population_covariance() const;

    /// figure1 only: the fixed design z (n x p).
    [[nodiscard]] const Eigen::MatrixXd& design() const noexcept { return z_; }

    [[nodiscard]] const DgpSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t p() const noexcept { return p_; }

private:
    DgpSpec spec_;
    std::size_t n_;
    std::size_t p_;
    Eigen::MatrixXd z_;
};

} // namespace hdboot::sim
