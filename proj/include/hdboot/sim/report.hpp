#pragma once

#include "hdboot/sim/config.hpp"

#include "json.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hdboot::sim {

struct MCCell {
    std::string label;
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t reps = 0;
    double estimate = 0.0;
    double mc_se = 0.0;
    /// Success count for proportion-type cells.
    std::optional<std::size_t> count;
    nlohmann::json extra = nlohmann::json::object();
};

struct MCReport {
    ScenarioConfig config;
    double estimate = 0.0;
    double mc_se = 0.0;
    std::vector<MCCell> cells;
    nlohmann::json summary = nlohmann::json::object();
    double runtime_seconds = 0.0;
    /// CSV tables written next to the report (file name -> contents).
    std::vector<std::pair<std::string, std::string>> tables;
};

/// Proportion cell with mc_se = sqrt(est (1 - est) / reps).
[[nodiscard]] MCCell proportion_cell(std::string label, std::size_t n, std::size_t p, std::size_t count,
                                     std::size_t reps);

[[nodiscard]] double binomial_se(double estimate, std::size_t reps);

/// JSON form. runtime_seconds is written only when `with_timing` is set so reruns stay byte-identical.
[[nodiscard]] nlohmann::json report_to_json(const MCReport& report, bool with_timing);

} // namespace hdboot::sim
