#include "hdboot/sim/report.hpp"

#include <cmath>

namespace hdboot::sim {

using nlohmann::json;

double binomial_se(double estimate, std::size_t reps) {
    return std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(reps));
}

MCCell proportion_cell(std::string label, std::size_t n, std::size_t p, std::size_t count, std::size_t reps) {
    MCCell c;
    c.label = std::move(label);
    c.n = n;
    c.p = p;
    c.reps = reps;
    c.count = count;
    c.estimate = static_cast<double>(count) / static_cast<double>(reps);
    c.mc_se = binomial_se(c.estimate, reps);
    return c;
}

json report_to_json(const MCReport& report, bool with_timing) {
    json cells = json::array();
    for (const auto& c : report.cells) {
        json jc{{"label", c.label}, {"n", c.n},           {"p", c.p},
                {"reps", c.reps},   {"estimate", c.estimate}, {"mc_se", c.mc_se}};
        if (c.count) jc["count"] = *c.count;
        if (!c.extra.empty()) jc["extra"] = c.extra;
        cells.push_back(std::move(jc));
    }
    json j{{"config", config_to_json(report.config)},
           {"estimate", report.estimate},
           {"mc_se", report.mc_se},
           {"cells", std::move(cells)},
           {"summary", report.summary}};
    if (with_timing) j["runtime_seconds"] = report.runtime_seconds;
    return j;
}

} // namespace hdboot::sim
