#pragma once

#include "hdboot/core/data_matrix.hpp"
#include "hdboot/core/stats.hpp"
#include "hdboot/core/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

namespace hdboot::gaussian {

/// B draws of N(0, S), one per row; row b uses stream_seed(seed, b).
[[nodiscard]] Eigen::MatrixXd gaussian_draws(const CovMatrix& S, std::size_t B, std::uint64_t seed);

/// Max-statistics of B draws of N(0, S), generated in fixed-size chunks so large B fits in memory.
[[nodiscard]] Eigen::VectorXd gaussian_max_draws(const CovMatrix& S, std::size_t B, std::uint64_t seed, MaxMode mode);

/// delta * (sqrt(2 ln p) + 2) / sigma_lo: the Gaussian-maximum anticoncentration bound.
[[nodiscard]] double nazarov_bound(double p, double sigma_lo, double delta);

/// sqrt(Delta) * ln p with Delta = max_jk |S1_jk - S2_jk| (the comparison bound without its constant).
[[nodiscard]] double comparison_scale(const CovMatrix& S1, const CovMatrix& S2, double p);
[[nodiscard]] double max_entrywise_gap(const CovMatrix& S1, const CovMatrix& S2);

/// (B_n^2 ln^5(pn) / n)^{1/4}.
[[nodiscard]] double rate_delta1(const RateInputs& r, double n, double p);
/// sqrt(B_n^2 ln(pn)^{3 - 2/q} / n^{1 - 2/q}); requires r.q > 2.
[[nodiscard]] double rate_delta2(const RateInputs& r, double n, double p);

struct AnticoncentrationRow {
    double t = 0.0;
    double mass = 0.0;
    double bound = 0.0;
    double se = 0.0;
    bool violation = false;
};

struct AnticoncentrationReport {
    double sigma_lo = 0.0;
    double delta = 0.0;
    std::size_t B = 0;
    std::vector<AnticoncentrationRow> rows;

    [[nodiscard]] bool any_violation() const;
};

/**
 * Empirical mass of W = max_j W_j, W ~ N(0, S), on each cell (t, t + delta]
 * of the grid, set against nazarov_bound. A cell is a violation when its mass
 * exceeds the bound by more than 4 binomial standard errors.
 */
[[nodiscard]] AnticoncentrationReport anticoncentration_check(const CovMatrix& S, double delta,
                                                              std::span<const double> t_grid, std::size_t B,
                                                              std::uint64_t seed);

/// Same check on precomputed maxima, for callers that reuse one batch of draws.
[[nodiscard]] AnticoncentrationReport anticoncentration_from_maxima(std::span<const double> maxima, std::size_t p,
                                                                    double sigma_lo, double delta,
                                                                    std::span<const double> t_grid);

/// CSV with header t,mass,bound,se,violation.
void write_csv(std::ostream& out, const AnticoncentrationReport& report);

} // namespace hdboot::gaussian
