#include "hdboot/inference/stepdown.hpp"

#include "hdboot/core/csv.hpp"
#include "hdboot/core/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace hdboot::inference {

namespace {

// (1 - alpha)-quantile of max_{j in active} draws_bj.
double subset_quantile(const Eigen::MatrixXd& draws, const std::vector<std::size_t>& active, double level,
                       std::vector<double>& maxima) {
    const Eigen::Index B = draws.rows();
    maxima.assign(static_cast<std::size_t>(B), -std::numeric_limits<double>::infinity());
    for (const std::size_t j : active) {
        const auto col = draws.col(static_cast<Eigen::Index>(j));
        for (Eigen::Index b = 0; b < B; ++b) maxima[static_cast<std::size_t>(b)] = std::max(maxima[static_cast<std::size_t>(b)], col[b]);
    }
    return bootstrap::order_statistic_quantile(maxima, level);
}

Eigen::VectorXd adjusted_p_values(const Eigen::VectorXd& t, const Eigen::MatrixXd& draws) {
    const auto p = static_cast<std::size_t>(t.size());
    const auto B = static_cast<std::size_t>(draws.rows());
    std::vector<std::size_t> ord(p);
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) {
        return t[static_cast<Eigen::Index>(a)] < t[static_cast<Eigen::Index>(b)];
    });

    std::vector<std::size_t> count(p, 0);
    for (std::size_t b = 0; b < B; ++b) {
        double running = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < p; ++k) {
            const auto j = static_cast<Eigen::Index>(ord[k]);
            running = std::max(running, draws(static_cast<Eigen::Index>(b), j));
            if (running >= t[j]) ++count[k];
        }
    }

    Eigen::VectorXd adj(static_cast<Eigen::Index>(p));
    std::size_t suffix_max = 0;
    for (std::size_t k = p; k-- > 0;) {
        suffix_max = std::max(suffix_max, count[k]);
        adj[static_cast<Eigen::Index>(ord[k])] = static_cast<double>(1 + suffix_max) / static_cast<double>(B + 1);
    }
    return adj;
}

} // namespace

StepdownResult stepdown_from_draws(const Eigen::VectorXd& t, const Eigen::MatrixXd& draws, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (t.size() < 1) throw InvalidDataError("stepdown needs at least one hypothesis");
    if (draws.cols() != t.size()) {
        throw InvalidDataError("draw matrix has " + std::to_string(draws.cols()) + " columns for " +
                               std::to_string(t.size()) + " statistics");
    }
    if (draws.rows() < 1) throw ConfigError("stepdown needs at least one bootstrap draw");
    if (!t.allFinite() || !draws.allFinite()) throw InvalidDataError("non-finite statistic or bootstrap draw");

    const auto p = static_cast<std::size_t>(t.size());
    StepdownResult res;
    res.statistics = t;
    res.B = static_cast<std::size_t>(draws.rows());
    res.rejection_step.assign(p, 0);

    std::vector<std::size_t> active(p);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::vector<double> maxima;
    const double level = 1.0 - alpha;

    while (!active.empty()) {
        StepdownStep step;
        step.active = active;
        step.critical_value = subset_quantile(draws, active, level, maxima);
        if (res.steps.empty()) {
            const bool tied = std::all_of(maxima.begin(), maxima.end(), [&](double m) { return m == maxima.front(); });
            res.coarse_quantile = tied || bootstrap::quantile_rank(level, res.B) == res.B;
        }
        std::vector<std::size_t> survivors;
        for (const std::size_t j : active) {
            if (t[static_cast<Eigen::Index>(j)] > step.critical_value) {
                step.rejected.push_back(j);
                res.rejection_step[j] = res.steps.size() + 1;
            } else {
                survivors.push_back(j);
            }
        }
        const bool progress = !step.rejected.empty();
        res.rejected.insert(res.rejected.end(), step.rejected.begin(), step.rejected.end());
        res.steps.push_back(std::move(step));
        if (!progress) break;
        active = std::move(survivors);
    }
    std::sort(res.rejected.begin(), res.rejected.end());
    res.adjusted_p = adjusted_p_values(t, draws);
    return res;
}

StepdownResult stepdown(const InfluencePanel& panel, double alpha, Sides sides, bootstrap::Scheme scheme,
                        std::size_t B, std::uint64_t seed) {
    if (sides == Sides::OneSided) {
        const Eigen::VectorXd t = panel.t_statistics();
        return stepdown_from_draws(t, influence_bootstrap(panel, scheme, B, seed).replicates, alpha);
    }

    const InfluencePanel both = doubled(panel);
    StepdownResult half = stepdown_from_draws(both.t_statistics(), influence_bootstrap(both, scheme, B, seed).replicates, alpha);
    const auto p = panel.p();
    StepdownResult res;
    res.B = half.B;
    res.coarse_quantile = half.coarse_quantile;
    res.steps = std::move(half.steps);
    res.statistics = half.statistics.head(static_cast<Eigen::Index>(p));
    res.adjusted_p = half.adjusted_p.head(static_cast<Eigen::Index>(p)).cwiseMin(half.adjusted_p.tail(static_cast<Eigen::Index>(p)));
    res.rejection_step.assign(p, 0);
    for (std::size_t j = 0; j < p; ++j) {
        const std::size_t a = half.rejection_step[j];
        const std::size_t b = half.rejection_step[j + p];
        res.rejection_step[j] = (a == 0) ? b : (b == 0 ? a : std::min(a, b));
        if (res.rejection_step[j] != 0) res.rejected.push_back(j);
    }
    return res;
}

Sides parse_sides(std::string_view name) {
    if (name == "one-sided") return Sides::OneSided;
    if (name == "two-sided") return Sides::TwoSided;
    throw ConfigError("unknown sides '" + std::string(name) + "' (expected one-sided or two-sided)");
}

void write_csv(std::ostream& out, const StepdownResult& result) {
    out << "index,statistic,adjusted_p,rejected,step\n";
    for (Eigen::Index j = 0; j < result.statistics.size(); ++j) {
        const auto step = result.rejection_step[static_cast<std::size_t>(j)];
        out << (j + 1) << ',' << format_double(result.statistics[j]) << ',' << format_double(result.adjusted_p[j])
            << ',' << (step != 0 ? 1 : 0) << ',' << step << '\n';
    }
}

} // namespace hdboot::inference
