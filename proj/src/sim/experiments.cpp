#include "hdboot/sim/experiments.hpp"

#include "hdboot/bootstrap/draws.hpp"
#include "hdboot/core/csv.hpp"
#include "hdboot/core/errors.hpp"
#include "hdboot/core/parallel.hpp"
#include "hdboot/core/rng.hpp"
#include "hdboot/core/stats.hpp"
#include "hdboot/gaussian/reference.hpp"
#include "hdboot/inference/cov_compare.hpp"
#include "hdboot/inference/simultaneous.hpp"
#include "hdboot/inference/stepdown.hpp"
#include "hdboot/lasso/penalty.hpp"
#include "hdboot/sim/dgp.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace hdboot::sim {

using nlohmann::json;

namespace {

// Streams under the master seed that are not tied to a replication.
constexpr std::uint64_t kRepTag = 0;
constexpr std::uint64_t kHeldOutTag = 1;
constexpr std::uint64_t kGaussTag = 2;

std::uint64_t tagged(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
    return stream_seed(stream_seed(master, tag), index);
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

std::string label_with(const std::string& name, double value) {
    return name + "=" + format_double(value);
}

// ECDF of sorted sample at x.
double ecdf(const std::vector<double>& sorted, double x) {
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin()) /
           static_cast<double>(sorted.size());
}

// max-abs of S_n over `reps` fresh datasets.
Eigen::VectorXd true_maxabs(const Generator& gen, std::size_t reps, std::uint64_t master) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(reps));
    parallel_for(reps, [&](std::size_t r) {
        const DataMatrix X = gen.draw(stream_seed(rep_seed(master, r), 0));
        out[static_cast<Eigen::Index>(r)] = max_stat(scaled_mean(X), MaxMode::MaxAbs);
    });
    return out;
}

Eigen::VectorXd bootstrap_maxabs(const DataMatrix& X, bootstrap::Scheme scheme, std::size_t B, std::uint64_t seed) {
    return bootstrap::reduce(bootstrap::draws(X, scheme, B, seed), MaxMode::MaxAbs).replicates.col(0);
}

struct Slope {
    double value = 0.0;
    double se = 0.0;
};

// OLS slope of ln d on ln n; se by the delta method with Var(ln d) = (se_d / d)^2.
Slope log_log_slope(const std::vector<double>& n, const std::vector<double>& d, const std::vector<double>& se) {
    const std::size_t k = n.size();
    double mx = 0.0;
    for (const double v : n) mx += std::log(v);
    mx /= static_cast<double>(k);
    double sxx = 0.0;
    for (const double v : n) sxx += (std::log(v) - mx) * (std::log(v) - mx);
    Slope s;
    double var = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double w = (std::log(n[i]) - mx) / sxx;
        const double ld = std::log(std::max(d[i], 1e-300));
        s.value += w * ld;
        var += w * w * (se[i] / d[i]) * (se[i] / d[i]);
    }
    s.se = std::sqrt(var);
    return s;
}

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void set_headline(MCReport& r, std::size_t cell) {
    r.estimate = r.cells.at(cell).estimate;
    r.mc_se = r.cells.at(cell).mc_se;
}

std::size_t count_true(const std::vector<char>& flags) {
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), char{1}));
}

} // namespace

std::uint64_t rep_seed(std::uint64_t master, std::uint64_t rep) { return tagged(master, kRepTag, rep); }

MCReport experiment_coverage(const ScenarioConfig& cfg) {
    const Generator gen(cfg.dgp, cfg.n, cfg.p, cfg.seed);
    std::vector<char> covered(cfg.reps, 0);
    const Eigen::VectorXd theta_star = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg.p));
    parallel_for(cfg.reps, [&](std::size_t r) {
        const std::uint64_t s = rep_seed(cfg.seed, r);
        const auto panel = inference::mean_panel(gen.draw(stream_seed(s, 0)));
        const auto ci = inference::simultaneous_ci(panel, cfg.alpha, cfg.scheme, cfg.B, stream_seed(s, 1));
        covered[r] = ci.contains(theta_star) ? 1 : 0;
    });
    MCReport rep;
    rep.config = cfg;
    rep.cells.push_back(proportion_cell("coverage", cfg.n, cfg.p, count_true(covered), cfg.reps));
    rep.summary["nominal"] = 1.0 - cfg.alpha;
    set_headline(rep, 0);
    return rep;
}

MCReport experiment_fwer(const ScenarioConfig& cfg) {
    const Generator gen(cfg.dgp, cfg.n, cfg.p, cfg.seed);
    const auto alt = static_cast<Eigen::Index>(cfg.alternatives);
    const bool alternatives_false = cfg.sides == inference::Sides::TwoSided ? cfg.signal != 0.0 : cfg.signal > 0.0;
    std::vector<char> false_reject(cfg.reps, 0);
    std::vector<char> all_alt(cfg.reps, 0);
    std::vector<double> power(cfg.reps, 0.0);
    parallel_for(cfg.reps, [&](std::size_t r) {
        const std::uint64_t s = rep_seed(cfg.seed, r);
        Eigen::MatrixXd X = gen.draw_matrix(stream_seed(s, 0));
        X.leftCols(alt).array() += cfg.signal;
        const auto res = inference::stepdown(inference::mean_panel(DataMatrix(std::move(X))), cfg.alpha, cfg.sides,
                                             cfg.scheme, cfg.B, stream_seed(s, 1));
        std::size_t hits = 0;
        for (const std::size_t j : res.rejected) {
            const bool is_alt = static_cast<Eigen::Index>(j) < alt && alternatives_false;
            if (is_alt) {
                ++hits;
            } else {
                false_reject[r] = 1;
            }
        }
        if (alt > 0) {
            all_alt[r] = hits == cfg.alternatives ? 1 : 0;
            power[r] = static_cast<double>(hits) / static_cast<double>(cfg.alternatives);
        }
    });
    MCReport rep;
    rep.config = cfg;
    rep.cells.push_back(proportion_cell("fwer", cfg.n, cfg.p, count_true(false_reject), cfg.reps));
    if (alt > 0 && alternatives_false) {
        rep.cells.push_back(proportion_cell("all_alternatives_rejected", cfg.n, cfg.p, count_true(all_alt), cfg.reps));
        MCCell avg;
        avg.label = "mean_power";
        avg.n = cfg.n;
        avg.p = cfg.p;
        avg.reps = cfg.reps;
        double total = 0.0;
        for (const double v : power) total += v;
        avg.estimate = total / static_cast<double>(cfg.reps);
        avg.mc_se = sample_sd(power) / std::sqrt(static_cast<double>(cfg.reps));
        rep.cells.push_back(std::move(avg));
    }
    rep.summary["nominal"] = cfg.alpha;
    set_headline(rep, 0);
    return rep;
}

MCReport experiment_rate(const ScenarioConfig& cfg) {
    MCReport rep;
    rep.config = cfg;
    std::vector<double> ns, ds, ses;
    json delta1 = json::array();
    for (const std::size_t n : cfg.n_grid) {
        const Generator gen(cfg.dgp, n, cfg.p, cfg.seed);
        const Eigen::VectorXd truth = true_maxabs(gen, cfg.reps, stream_seed(cfg.seed, n));
        const DataMatrix held = gen.draw(tagged(cfg.seed, kHeldOutTag, n));
        const Eigen::VectorXd boot = bootstrap_maxabs(held, cfg.scheme, cfg.B, tagged(cfg.seed, kGaussTag, n));

        MCCell c;
        c.label = "n=" + std::to_string(n);
        c.n = n;
        c.p = cfg.p;
        c.reps = cfg.reps;
        c.estimate = ks_distance(as_span(truth), as_span(boot));
        c.mc_se = ks_standard_error(cfg.reps, cfg.B);
        const double d1 = gaussian::rate_delta1(RateInputs{}, static_cast<double>(n), static_cast<double>(cfg.p));
        c.extra["delta1"] = d1;
        c.extra["bootstrap_draws"] = cfg.B;
        delta1.push_back(d1);
        ns.push_back(static_cast<double>(n));
        ds.push_back(c.estimate);
        ses.push_back(c.mc_se);
        rep.cells.push_back(std::move(c));
    }
    const Slope s = log_log_slope(ns, ds, ses);
    rep.estimate = s.value;
    rep.mc_se = s.se;
    rep.summary["slope"] = s.value;
    rep.summary["slope_se"] = s.se;
    rep.summary["delta1"] = delta1;
    bool decreasing = true;
    for (std::size_t i = 1; i < ds.size(); ++i) {
        if (ds[i] > ds[i - 1] + 2.0 * std::hypot(ses[i], ses[i - 1])) decreasing = false;
    }
    rep.summary["weakly_decreasing"] = decreasing;
    return rep;
}

MCReport experiment_pp(const ScenarioConfig& cfg) {
    const std::vector<std::size_t> grid = cfg.n_grid.empty() ? std::vector<std::size_t>{cfg.n} : cfg.n_grid;
    const bootstrap::Scheme mult =
        bootstrap::is_multiplier(cfg.scheme) ? cfg.scheme : bootstrap::Scheme::GaussianMultiplier;
    MCReport rep;
    rep.config = cfg;
    std::ostringstream csv;
    csv << "n,u,F_true,F_gauss,F_mult,F_emp\n";
    for (const std::size_t n : grid) {
        const Generator gen(cfg.dgp, n, cfg.p, cfg.seed);
        const Eigen::VectorXd truth = true_maxabs(gen, cfg.reps, stream_seed(cfg.seed, n));
        const Eigen::VectorXd gauss = gaussian::gaussian_max_draws(gen.population_covariance(), cfg.B,
                                                                   tagged(cfg.seed, kGaussTag, n), MaxMode::MaxAbs);
        const DataMatrix held = gen.draw(tagged(cfg.seed, kHeldOutTag, n));
        const std::uint64_t bseed = tagged(cfg.seed, kHeldOutTag, n + 1);
        const Eigen::VectorXd fm = bootstrap_maxabs(held, mult, cfg.B, bseed);
        const Eigen::VectorXd fe = bootstrap_maxabs(held, bootstrap::Scheme::Empirical, cfg.B, bseed);

        auto sorted = [](const Eigen::VectorXd& v) {
            std::vector<double> s(v.data(), v.data() + v.size());
            std::sort(s.begin(), s.end());
            return s;
        };
        const auto st = sorted(truth), sg = sorted(gauss), sm = sorted(fm), se = sorted(fe);
        double gap_g = 0.0, gap_m = 0.0, gap_e = 0.0;
        double tail_m = 0.0, tail_e = 0.0;
        for (int k = 1; k <= 99; ++k) {
            const double u = k / 100.0;
            const double q = bootstrap::order_statistic_quantile(st, u);
            const double ft = ecdf(st, q), fg = ecdf(sg, q), fmv = ecdf(sm, q), fev = ecdf(se, q);
            csv << n << ',' << format_double(u) << ',' << format_double(ft) << ',' << format_double(fg) << ','
                << format_double(fmv) << ',' << format_double(fev) << '\n';
            gap_g = std::max(gap_g, std::abs(fg - ft));
            gap_m = std::max(gap_m, std::abs(fmv - ft));
            gap_e = std::max(gap_e, std::abs(fev - ft));
            if (k == 95) {
                tail_m = fmv - ft;
                tail_e = fev - ft;
            }
        }
        auto cell = [&](const std::string& method, double gap, std::size_t draws) {
            MCCell c;
            c.label = method + " n=" + std::to_string(n);
            c.n = n;
            c.p = cfg.p;
            c.reps = cfg.reps;
            c.estimate = gap;
            c.mc_se = ks_standard_error(cfg.reps, draws);
            return c;
        };
        rep.cells.push_back(cell("gaussian", gap_g, cfg.B));
        MCCell cm = cell("multiplier", gap_m, cfg.B);
        cm.extra["upper_tail_gap"] = tail_m;
        rep.cells.push_back(std::move(cm));
        MCCell ce = cell("empirical", gap_e, cfg.B);
        ce.extra["upper_tail_gap"] = tail_e;
        rep.cells.push_back(std::move(ce));
    }
    rep.tables.emplace_back("pp.csv", csv.str());
    set_headline(rep, 0);
    return rep;
}

MCReport experiment_covcmp_size(const ScenarioConfig& cfg) {
    const std::size_t m = cfg.m == 0 ? cfg.n : cfg.m;
    const Generator gx(cfg.dgp, cfg.n, cfg.p, cfg.seed);
    const Generator gy(cfg.dgp, m, cfg.p, cfg.seed);
    std::vector<char> reject(cfg.reps, 0);
    parallel_for(cfg.reps, [&](std::size_t r) {
        const std::uint64_t s = rep_seed(cfg.seed, r);
        const auto res = inference::cov_compare_test(gx.draw(stream_seed(s, 0)), gy.draw(stream_seed(s, 2)),
                                                     cfg.alpha, cfg.B, stream_seed(s, 1));
        reject[r] = res.reject ? 1 : 0;
    });
    MCReport rep;
    rep.config = cfg;
    rep.cells.push_back(proportion_cell("rejection_rate", cfg.n, cfg.p, count_true(reject), cfg.reps));
    rep.cells.back().extra["m"] = m;
    rep.summary["nominal"] = cfg.alpha;
    rep.summary["unbalanced"] = std::max(cfg.n, m) > 4 * std::min(cfg.n, m);
    set_headline(rep, 0);
    return rep;
}

MCReport experiment_supscore_size(const ScenarioConfig& cfg) {
    const Generator gen(cfg.dgp, cfg.n, cfg.p, cfg.seed);
    std::vector<char> reject(cfg.reps, 0);
    parallel_for(cfg.reps, [&](std::size_t r) {
        const std::uint64_t s = rep_seed(cfg.seed, r);
        DataMatrix X = gen.draw(stream_seed(s, 0));
        Engine rng(stream_seed(s, 2));
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd y(static_cast<Eigen::Index>(cfg.n));
        for (auto& v : y) v = normal(rng);
        const auto res = lasso::sup_score_test(lasso::RegressionData(std::move(y), std::move(X)), cfg.alpha, cfg.B,
                                               stream_seed(s, 1));
        reject[r] = res.reject ? 1 : 0;
    });
    MCReport rep;
    rep.config = cfg;
    rep.cells.push_back(proportion_cell("rejection_rate", cfg.n, cfg.p, count_true(reject), cfg.reps));
    rep.summary["nominal"] = cfg.alpha;
    set_headline(rep, 0);
    return rep;
}

MCReport experiment_lasso_rate(const ScenarioConfig& cfg) {
    MCReport rep;
    rep.config = cfg;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& np : cfg.np_grid) {
        const std::size_t n = np[0];
        const std::size_t p = np[1];
        const Generator gen(cfg.dgp, n, p, cfg.seed);
        const double rate = std::sqrt(static_cast<double>(cfg.sparsity) * std::log(static_cast<double>(p)) /
                                      static_cast<double>(n));
        Eigen::VectorXd beta_star = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
        beta_star.head(static_cast<Eigen::Index>(cfg.sparsity)).setConstant(cfg.signal);
        const std::uint64_t cell_seed = stream_seed(cfg.seed, n * 1000003ULL + p);
        std::vector<double> ratio(cfg.reps, 0.0);
        std::vector<char> support(cfg.reps, 0);
        parallel_for(cfg.reps, [&](std::size_t r) {
            const std::uint64_t s = rep_seed(cell_seed, r);
            Eigen::MatrixXd X = gen.draw_matrix(stream_seed(s, 0));
            Engine rng(stream_seed(s, 2));
            std::normal_distribution<double> normal(0.0, 1.0);
            Eigen::VectorXd y = X * beta_star;
            for (auto& v : y) v += normal(rng);
            lasso::RlassoOptions opts;
            opts.alpha = cfg.alpha;
            opts.mode = lasso::NoiseModel::Heteroscedastic;
            opts.refinements = cfg.refinements;
            opts.B = cfg.B;
            opts.seed = stream_seed(s, 1);
            const lasso::RegressionData d(std::move(y), DataMatrix(X));
            const auto fit = lasso::rlasso_pipeline(d, opts);
            const Eigen::VectorXd diff = X * (fit.beta - beta_star);
            ratio[r] = std::sqrt(diff.squaredNorm() / static_cast<double>(n)) / rate;
            bool covers = true;
            for (std::size_t j = 0; j < cfg.sparsity; ++j) covers = covers && fit.beta[static_cast<Eigen::Index>(j)] != 0.0;
            support[r] = covers ? 1 : 0;
        });
        MCCell c;
        c.label = "n=" + std::to_string(n) + " p=" + std::to_string(p);
        c.n = n;
        c.p = p;
        c.reps = cfg.reps;
        c.estimate = median(ratio);
        // Normal-theory standard error of a sample median.
        c.mc_se = 1.2533141373155 * sample_sd(ratio) / std::sqrt(static_cast<double>(cfg.reps));
        c.extra["rate"] = rate;
        c.extra["support_recovered"] = static_cast<double>(count_true(support)) / static_cast<double>(cfg.reps);
        lo = std::min(lo, c.estimate);
        hi = std::max(hi, c.estimate);
        rep.cells.push_back(std::move(c));
    }
    rep.summary["band_ratio"] = hi / lo;
    rep.estimate = hi / lo;
    rep.mc_se = 0.0;
    return rep;
}

MCReport experiment_comparison(const ScenarioConfig& cfg) {
    const Generator gen(cfg.dgp, cfg.n, cfg.p, cfg.seed);
    const CovMatrix S1 = gen.population_covariance();
    const Eigen::VectorXd s = S1.entries().diagonal().cwiseSqrt();
    const Eigen::VectorXd base = gaussian::gaussian_max_draws(S1, cfg.B, tagged(cfg.seed, kGaussTag, 0), MaxMode::MaxAbs);
    const Eigen::VectorXd same = gaussian::gaussian_max_draws(S1, cfg.B, tagged(cfg.seed, kGaussTag, 1), MaxMode::MaxAbs);
    const double se = ks_standard_error(cfg.B, cfg.B);

    MCReport rep;
    rep.config = cfg;
    MCCell b;
    b.label = "baseline";
    b.n = cfg.n;
    b.p = cfg.p;
    b.reps = cfg.B;
    b.estimate = ks_distance(as_span(base), as_span(same));
    b.mc_se = se;
    rep.cells.push_back(std::move(b));
    for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
        const double d = cfg.deltas[i];
        const CovMatrix S2 = CovMatrix::trusted((1.0 - d) * S1.entries() + d * s * s.transpose());
        const Eigen::VectorXd other =
            gaussian::gaussian_max_draws(S2, cfg.B, tagged(cfg.seed, kGaussTag, 2 + i), MaxMode::MaxAbs);
        MCCell c;
        c.label = label_with("delta", d);
        c.n = cfg.n;
        c.p = cfg.p;
        c.reps = cfg.B;
        c.estimate = ks_distance(as_span(base), as_span(other));
        c.mc_se = se;
        c.extra["gap"] = gaussian::max_entrywise_gap(S1, S2);
        c.extra["scale"] = gaussian::comparison_scale(S1, S2, static_cast<double>(cfg.p));
        rep.cells.push_back(std::move(c));
    }
    set_headline(rep, 0);
    return rep;
}

MCReport experiment_anticoncentration(const ScenarioConfig& cfg) {
    const Generator gen(cfg.dgp, cfg.n, cfg.p, cfg.seed);
    const CovMatrix S = gen.population_covariance();
    const double min_var = S.entries().diagonal().minCoeff();
    if (!(min_var > 0.0)) throw InvalidDataError("anticoncentration needs a covariance with positive diagonal");
    const Eigen::VectorXd maxima = gaussian::gaussian_max_draws(S, cfg.B, tagged(cfg.seed, kGaussTag, 0), MaxMode::Max);
    const auto report = gaussian::anticoncentration_from_maxima(as_span(maxima), cfg.p, std::sqrt(min_var), cfg.delta,
                                                                cfg.t_grid);
    std::ostringstream csv;
    gaussian::write_csv(csv, report);

    MCReport rep;
    rep.config = cfg;
    MCCell c;
    c.label = "max_excess";
    c.n = cfg.n;
    c.p = cfg.p;
    c.reps = cfg.B;
    c.estimate = -std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    double max_mass = 0.0;
    for (const auto& row : report.rows) {
        if (row.mass - row.bound > c.estimate) {
            c.estimate = row.mass - row.bound;
            c.mc_se = row.se;
        }
        max_mass = std::max(max_mass, row.mass);
        if (row.violation) ++violations;
    }
    rep.cells.push_back(std::move(c));
    rep.summary["violations"] = violations;
    rep.summary["bound"] = report.rows.empty() ? 0.0 : report.rows.front().bound;
    rep.summary["max_mass"] = max_mass;
    rep.summary["sigma_lo"] = report.sigma_lo;
    rep.tables.emplace_back("anticoncentration.csv", csv.str());
    set_headline(rep, 0);
    return rep;
}

MCReport run_experiment(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    MCReport rep;
    switch (cfg.experiment) {
    case ExperimentKind::PP: rep = experiment_pp(cfg); break;
    case ExperimentKind::Coverage: rep = experiment_coverage(cfg); break;
    case ExperimentKind::Fwer: rep = experiment_fwer(cfg); break;
    case ExperimentKind::Rate: rep = experiment_rate(cfg); break;
    case ExperimentKind::CovcmpSize: rep = experiment_covcmp_size(cfg); break;
    case ExperimentKind::SupscoreSize: rep = experiment_supscore_size(cfg); break;
    case ExperimentKind::LassoRate: rep = experiment_lasso_rate(cfg); break;
    case ExperimentKind::Comparison: rep = experiment_comparison(cfg); break;
    case ExperimentKind::Anticoncentration: rep = experiment_anticoncentration(cfg); break;
    }
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

} // namespace hdboot::sim
