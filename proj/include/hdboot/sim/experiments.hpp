#pragma once

#include "hdboot/sim/config.hpp"
#include "hdboot/sim/report.hpp"

#include <cstdint>

namespace hdboot::sim {

/// Seed of replication `rep`; its data, bootstrap and auxiliary streams are stream_seed(rep_seed(..), 0/1/2).
[[nodiscard]] std::uint64_t rep_seed(std::uint64_t master, std::uint64_t rep);

/// P-P table of ||S_n||_inf against its Gaussian, multiplier and empirical approximations.
[[nodiscard]] MCReport experiment_pp(const ScenarioConfig& cfg);
/// Fraction of replications whose rectangle covers theta* = 0.
[[nodiscard]] MCReport experiment_coverage(const ScenarioConfig& cfg);
/// Stepdown family-wise error rate, and power when alternatives are present.
[[nodiscard]] MCReport experiment_fwer(const ScenarioConfig& cfg);
/// KS distance between the true and bootstrap max-abs laws over n_grid, with the fitted log-log slope.
[[nodiscard]] MCReport experiment_rate(const ScenarioConfig& cfg);
[[nodiscard]] MCReport experiment_covcmp_size(const ScenarioConfig& cfg);
[[nodiscard]] MCReport experiment_supscore_size(const ScenarioConfig& cfg);
/// Median prediction-norm error of the bootstrap-penalty Lasso over rate sqrt(s ln p / n), per np_grid cell.
[[nodiscard]] MCReport experiment_lasso_rate(const ScenarioConfig& cfg);
/// KS distance between Gaussian maxima under S and (1 - d) S + d s s^T, s = sqrt(diag S), for each d.
[[nodiscard]] MCReport experiment_comparison(const ScenarioConfig& cfg);
[[nodiscard]] MCReport experiment_anticoncentration(const ScenarioConfig& cfg);

/// Dispatches on cfg.experiment.
[[nodiscard]] MCReport run_experiment(const ScenarioConfig& cfg);

} // namespace hdboot::sim
