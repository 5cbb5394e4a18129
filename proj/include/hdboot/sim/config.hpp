#pragma once

#include "hdboot/bootstrap/draws.hpp"
#include "hdboot/inference/stepdown.hpp"
#include "hdboot/sim/dgp.hpp"

#include "json.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hdboot::sim {

enum class ExperimentKind {
    PP,
    Coverage,
    Fwer,
    Rate,
    CovcmpSize,
    SupscoreSize,
    LassoRate,
    Comparison,
    Anticoncentration,
};

[[nodiscard]] std::string to_string(ExperimentKind kind);
[[nodiscard]] ExperimentKind parse_experiment(std::string_view name);

/**
 * Declarative description of one Monte Carlo experiment.
 *
 * JSON form: {"experiment": ..., "dgp": {"name": ..., <dgp parameters>}, "n", "p",
 * "reps", "B", "alpha", "scheme", "seed", <experiment-specific keys>}. Unknown keys
 * and keys that do not belong to the chosen experiment are rejected.
 */
struct ScenarioConfig {
    ExperimentKind experiment = ExperimentKind::Coverage;
    DgpSpec dgp;
    std::size_t n = 100;
    std::size_t p = 10;
    std::size_t reps = 100;
    std::size_t B = 999;
    double alpha = 0.05;
    bootstrap::Scheme scheme = bootstrap::Scheme::GaussianMultiplier;
    std::uint64_t seed = 0;

    std::vector<std::size_t> n_grid;                  // pp, rate
    std::vector<std::array<std::size_t, 2>> np_grid;  // lasso_rate
    std::size_t alternatives = 0;                     // fwer: leading coordinates with mean `signal`
    double signal = 0.0;                              // fwer, lasso_rate
    inference::Sides sides = inference::Sides::OneSided;  // fwer
    std::size_t m = 0;                                // covcmp_size: second sample size, 0 means n
    std::size_t sparsity = 5;                         // lasso_rate
    std::size_t refinements = 2;                      // lasso_rate
    std::vector<double> deltas;                       // comparison
    double delta = 0.05;                              // anticoncentration
    std::vector<double> t_grid;                       // anticoncentration

    void validate() const;
};

[[nodiscard]] ScenarioConfig config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json config_to_json(const ScenarioConfig& cfg);
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);

} // namespace hdboot::sim
