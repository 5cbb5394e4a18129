// Acceptance runner. `hdboot_acceptance N` runs criterion N; with no argument all of them run.
// Exit status: 0 pass, 1 fail, 77 skipped (criterion 10 without HDBOOT_FUND_CSV).

#include "hdboot/core/csv.hpp"
#include "hdboot/core/errors.hpp"
#include "hdboot/core/parallel.hpp"
#include "hdboot/inference/panel.hpp"
#include "hdboot/inference/stepdown.hpp"
#include "hdboot/lasso/lasso.hpp"
#include "hdboot/sim/experiments.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hdboot;
using namespace hdboot::sim;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kSkip = 77;

struct Outcome {
    bool pass = true;
    std::ostringstream log;

    void check(bool ok, const std::string& what) {
        log << "  [" << (ok ? "ok" : "FAILED") << "] " << what << '\n';
        pass = pass && ok;
    }
};

std::string fmt(double v) { return format_double(v); }

ScenarioConfig base(ExperimentKind kind, std::uint64_t seed) {
    ScenarioConfig c;
    c.experiment = kind;
    c.seed = seed;
    return c;
}

DgpSpec equicorrelated(double rho) {
    DgpSpec d;
    d.kind = DgpKind::GaussianEquicorrelated;
    d.rho = rho;
    return d;
}

const MCCell& cell(const MCReport& r, const std::string& label) {
    for (const auto& c : r.cells)
        if (c.label == label) return c;
    throw std::runtime_error("missing cell " + label);
}

// ---------------------------------------------------------------------------

void oracle_equivalence(Outcome& o) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> lam(0.01, 2.0);
    int lasso_ok = 0;
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const int p = 1 + c % 2;
        const int n = 6 + c % 7;
        Eigen::MatrixXd X(n, p);
        Eigen::VectorXd y(n);
        for (auto& v : X.reshaped()) v = g(rng);
        for (auto& v : y) v = g(rng);
        y += 0.8 * X.col(0);
        const double lambda = lam(rng);
        const auto fit = lasso::lasso_fit(lasso::RegressionData(y, DataMatrix(X)), lambda, 1e-12);
        const Eigen::VectorXd ref = oracle::lasso_brute_force(y, X, lambda);
        const double err = (fit.beta - ref).cwiseAbs().maxCoeff();
        worst = std::max(worst, err);
        if (err <= 1e-6) ++lasso_ok;
    }
    o.check(lasso_ok == 100, "lasso_fit vs brute force: " + std::to_string(lasso_ok) + "/100 within 1e-6 (worst " +
                                 fmt(worst) + ")");

    bool st_ok = true;
    for (double z = -3.0; z <= 3.0; z += 0.125) {
        for (double t : {0.0, 0.25, 1.0, 2.5}) {
            const double want = z > t ? z - t : (z < -t ? z + t : 0.0);
            st_ok = st_ok && lasso::soft_threshold(z, t) == want;
        }
    }
    o.check(st_ok, "soft_threshold equals its closed form exactly");

    Eigen::MatrixXd draws(10, 2);
    draws.col(1) << -1, -0.5, 0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.8, 1.9;
    draws.col(0) << 2.0, -5, -5, -5, -5, -5, -5, -5, -5, 2.5;
    const auto hand = inference::stepdown_from_draws(Eigen::Vector2d(3.0, -1.0), draws, 0.1);
    o.check(hand.steps.size() == 2 && hand.steps[0].critical_value == 2.0 && hand.steps[1].critical_value == 1.8 &&
                hand.rejected == std::vector<std::size_t>{0},
            "hand-traced stepdown: c = (2.0, 1.8), rejects {1} in two steps");

    std::uniform_int_distribution<int> small(-3, 3);
    std::size_t cases = 0, agree = 0;
    for (int p = 1; p <= 4; ++p) {
        for (int B = 1; B <= 20; ++B) {
            for (int rep = 0; rep < 10; ++rep) {
                Eigen::MatrixXd d(B, p);
                for (auto& v : d.reshaped()) v = small(rng) * 0.5;
                Eigen::VectorXd t(p);
                for (auto& v : t) v = small(rng) * 0.5;
                for (const double alpha : {0.05, 0.1, 0.2, 0.5}) {
                    const auto got = inference::stepdown_from_draws(t, d, alpha);
                    const auto want = oracle::stepdown(t, d, alpha);
                    bool same = got.rejection_step == want.step_of && got.adjusted_p == want.adjusted_p &&
                                got.steps.size() == want.critical.size();
                    for (std::size_t s = 0; same && s < got.steps.size(); ++s)
                        same = got.steps[s].critical_value == want.critical[s];
                    ++cases;
                    if (same) ++agree;
                }
            }
        }
    }
    o.check(agree == cases, "stepdown vs brute-force subset quantiles: " + std::to_string(agree) + "/" +
                                std::to_string(cases) + " enumerated draw sets identical");
}

void anticoncentration(Outcome& o) {
    std::vector<double> grid;
    for (int k = -40; k <= 120; ++k) grid.push_back(0.05 * k);
    for (const std::size_t p : {100, 1000}) {
        for (const double rho : {0.0, 0.5}) {
            ScenarioConfig c = base(ExperimentKind::Anticoncentration, 2);
            c.dgp = equicorrelated(rho);
            c.n = 100;
            c.p = p;
            c.B = 100000;
            c.delta = 0.05;
            c.t_grid = grid;
            const MCReport r = run_experiment(c);
            const auto& mc = r.cells.front();
            o.check(r.summary["violations"] == 0,
                    "p=" + std::to_string(p) + " rho=" + fmt(rho) + ": max mass " +
                        fmt(r.summary["max_mass"].get<double>()) + " vs bound " + fmt(r.summary["bound"].get<double>()) +
                        ", worst excess " + fmt(mc.estimate) + " (se " + fmt(mc.mc_se) + "), " +
                        std::to_string(r.summary["violations"].get<int>()) + " of " + std::to_string(grid.size()) +
                        " grid points above bound + 4 se");
        }
    }
}

void comparison(Outcome& o) {
    ScenarioConfig c = base(ExperimentKind::Comparison, 3);
    c.dgp = equicorrelated(0.5);
    c.n = 100;
    c.p = 200;
    c.B = 100000;
    c.deltas = {0.0, 0.01, 0.05, 0.2};
    const MCReport r = run_experiment(c);
    const auto& b = cell(r, "baseline");
    std::vector<double> d;
    for (std::size_t i = 1; i < r.cells.size(); ++i) {
        d.push_back(r.cells[i].estimate);
        o.log << "  " << r.cells[i].label << ": ks " << fmt(r.cells[i].estimate) << " (se " << fmt(r.cells[i].mc_se)
              << ")\n";
    }
    const double pair_se = std::sqrt(2.0) * b.mc_se;
    o.check(std::abs(d[0] - b.estimate) <= 2.0 * pair_se,
            "delta=0 ks " + fmt(d[0]) + " vs same-law baseline " + fmt(b.estimate) + " within 2 se (" + fmt(pair_se) + ")");
    bool mono = true;
    for (std::size_t i = 1; i < d.size(); ++i) mono = mono && d[i] >= d[i - 1] - 2.0 * pair_se;
    o.check(mono, "ks distance monotone in delta within 2 se");
}

void rate_study(Outcome& o) {
    for (const auto scheme : {bootstrap::Scheme::GaussianMultiplier, bootstrap::Scheme::Empirical}) {
        ScenarioConfig c = base(ExperimentKind::Rate, 4);
        c.dgp.kind = DgpKind::Figure1Regression;
        c.p = 200;
        c.n_grid = {50, 200, 800};
        c.reps = 2000;
        c.B = 2000;
        c.scheme = scheme;
        const MCReport r = run_experiment(c);
        std::ostringstream cells;
        for (const auto& x : r.cells) cells << x.label << ": " << fmt(x.estimate) << " (se " << fmt(x.mc_se) << ") ";
        o.log << "  " << bootstrap::to_string(scheme) << ": " << cells.str() << '\n';
        o.check(r.summary["weakly_decreasing"].get<bool>(),
                bootstrap::to_string(scheme) + ": ks distance weakly decreasing in n (2 se slack)");
        o.check(r.summary["slope"].get<double>() < 0.0, bootstrap::to_string(scheme) + ": log-log slope " +
                                                            fmt(r.summary["slope"].get<double>()) + " (se " +
                                                            fmt(r.summary["slope_se"].get<double>()) + ") < 0");
    }
}

void coverage(Outcome& o) {
    DgpSpec dup;
    dup.kind = DgpKind::DuplicatedCoordinates;
    dup.k = 250;
    for (const auto& [name, dgp] : {std::pair{std::string("equicorrelated rho=0.5"), equicorrelated(0.5)},
                                    std::pair{std::string("duplicated k=250"), dup}}) {
        ScenarioConfig c = base(ExperimentKind::Coverage, 5);
        c.dgp = dgp;
        c.n = 200;
        c.p = 500;
        c.reps = 1000;
        c.B = 999;
        c.alpha = 0.05;
        const MCReport r = run_experiment(c);
        o.check(std::abs(r.estimate - 0.95) <= 0.021,
                name + ": coverage " + fmt(r.estimate) + " (se " + fmt(r.mc_se) + ") within 0.95 +/- 0.021");
    }
}

void fwer(Outcome& o) {
    ScenarioConfig c = base(ExperimentKind::Fwer, 6);
    c.dgp.kind = DgpKind::HeavyTailT;
    c.dgp.df = 5.0;
    c.n = 100;
    c.p = 200;
    c.reps = 1000;
    c.B = 999;
    c.alpha = 0.1;
    const MCReport null = run_experiment(c);
    o.check(null.estimate <= 0.13, "full null: fwer " + fmt(null.estimate) + " (se " + fmt(null.mc_se) + ") <= 0.13");

    c.alternatives = 10;
    c.signal = 1.0;
    const MCReport alt = run_experiment(c);
    const auto& all = cell(alt, "all_alternatives_rejected");
    o.log << "  with alternatives: fwer " << fmt(alt.estimate) << ", mean power " << fmt(cell(alt, "mean_power").estimate)
          << '\n';
    o.check(all.estimate >= 0.95,
            "10 alternatives with mean 1: all rejected in " + fmt(all.estimate) + " (se " + fmt(all.mc_se) + ") >= 0.95");
}

bool within_nominal(Outcome& o, const MCReport& r, double alpha, const std::string& name) {
    const double se = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(r.config.reps));
    const bool ok = std::abs(r.estimate - alpha) <= 3.0 * se;
    o.check(ok, name + ": rejection rate " + fmt(r.estimate) + " vs alpha " + fmt(alpha) + " +/- 3 se (" + fmt(3.0 * se) +
                    ")");
    return ok;
}

void covcmp_size(Outcome& o) {
    ScenarioConfig c = base(ExperimentKind::CovcmpSize, 7);
    c.dgp = equicorrelated(0.0);
    c.n = 100;
    c.m = 100;
    c.p = 50;
    c.reps = 1000;
    c.B = 499;
    c.alpha = 0.05;
    within_nominal(o, run_experiment(c), 0.05, "covariance comparison, n = m = 100, p = 50");
}

void lasso_band(Outcome& o) {
    ScenarioConfig c = base(ExperimentKind::LassoRate, 8);
    c.dgp = equicorrelated(0.0);
    c.np_grid = {{{100, 100}}, {{200, 400}}, {{400, 1600}}};
    c.sparsity = 5;
    c.signal = 1.0;
    c.reps = 200;
    c.B = 500;
    c.alpha = 0.1;
    const MCReport r = run_experiment(c);
    for (const auto& x : r.cells)
        o.log << "  " << x.label << ": median ratio " << fmt(x.estimate) << " (se " << fmt(x.mc_se) << ")\n";
    o.check(r.estimate <= 2.0, "max/min median ratio " + fmt(r.estimate) + " <= 2");
}

void supscore_size(Outcome& o) {
    ScenarioConfig c = base(ExperimentKind::SupscoreSize, 9);
    c.dgp = equicorrelated(0.0);
    c.n = 100;
    c.p = 500;
    c.reps = 1000;
    c.B = 999;
    c.alpha = 0.1;
    within_nominal(o, run_experiment(c), 0.1, "sup-score test, n = 100, p = 500");
}

int fund(Outcome& o) {
    const char* path = std::getenv("HDBOOT_FUND_CSV");
    if (path == nullptr || *path == '\0') {
        o.log << "  HDBOOT_FUND_CSV is not set\n";
        return kSkip;
    }
    const auto panel = inference::mean_panel(DataMatrix(read_csv(path).values));
    o.log << "  " << panel.n() << " x " << panel.p() << " returns\n";
    for (const auto scheme : {bootstrap::Scheme::Empirical, bootstrap::Scheme::GaussianMultiplier}) {
        const auto res = inference::stepdown(panel, 0.1, inference::Sides::OneSided, scheme, 499, 111);
        std::size_t below = 0;
        std::ostringstream which;
        for (Eigen::Index j = 0; j < res.adjusted_p.size(); ++j) {
            if (res.adjusted_p[j] < 0.1) {
                ++below;
                which << ' ' << (j + 1);
            }
        }
        o.check(below == 2, bootstrap::to_string(scheme) + ": " + std::to_string(below) +
                                " adjusted p-values below 0.1 (columns" + which.str() + ")");
    }
    return o.pass ? kPass : kFail;
}

ScenarioConfig tiny(ExperimentKind kind) {
    ScenarioConfig c = base(kind, 11);
    c.n = 40;
    c.p = 12;
    c.reps = 20;
    c.B = 199;
    switch (kind) {
    case ExperimentKind::PP:
    case ExperimentKind::Rate:
        c.dgp.kind = DgpKind::Figure1Regression;
        c.n_grid = {30, 60};
        break;
    case ExperimentKind::Fwer:
        c.dgp.kind = DgpKind::HeavyTailT;
        c.alternatives = 3;
        c.signal = 0.8;
        c.sides = inference::Sides::TwoSided;
        break;
    case ExperimentKind::LassoRate:
        c.np_grid = {{{50, 20}}, {{80, 40}}};
        c.sparsity = 3;
        c.signal = 1.0;
        break;
    case ExperimentKind::Comparison:
        c.dgp = equicorrelated(0.3);
        c.deltas = {0.0, 0.1};
        c.B = 2000;
        break;
    case ExperimentKind::Anticoncentration:
        c.t_grid = {0.0, 0.5, 1.0, 1.5};
        c.B = 5000;
        break;
    case ExperimentKind::CovcmpSize: c.m = 50; break;
    default: break;
    }
    return c;
}

void determinism(Outcome& o) {
    for (auto k : {ExperimentKind::PP, ExperimentKind::Coverage, ExperimentKind::Fwer, ExperimentKind::Rate,
                   ExperimentKind::CovcmpSize, ExperimentKind::SupscoreSize, ExperimentKind::LassoRate,
                   ExperimentKind::Comparison, ExperimentKind::Anticoncentration}) {
        const ScenarioConfig c = tiny(k);
        auto dump = [&](std::size_t threads) {
            set_thread_count(threads);
            const MCReport r = run_experiment(c);
            std::string s = report_to_json(r, false).dump(2);
            for (const auto& [name, text] : r.tables) s += name + '\n' + text;
            return s;
        };
        const std::string a = dump(1);
        const std::string b = dump(1);
        const std::string d = dump(3);
        o.check(a == b && a == d, to_string(k) + ": rerun and 3-thread run byte-identical (" + std::to_string(a.size()) +
                                      " bytes)");
    }
    set_thread_count(0);
}

struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<int(Outcome&)> run;
};

template <class F>
std::function<int(Outcome&)> plain(F f) {
    return [f](Outcome& o) {
        f(o);
        return o.pass ? kPass : kFail;
    };
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list{
        {"oracle equivalence", 10, plain(oracle_equivalence)},
        {"anticoncentration", 60, plain(anticoncentration)},
        {"gaussian comparison", 120, plain(comparison)},
        {"clt and bootstrap rate study", 600, plain(rate_study)},
        {"simultaneous coverage", 900, plain(coverage)},
        {"stepdown fwer and power", 600, plain(fwer)},
        {"covariance comparison size", 600, plain(covcmp_size)},
        {"lasso rate band", 900, plain(lasso_band)},
        {"sup-score size", 300, plain(supscore_size)},
        {"fund dataset stepdown", 60, fund},
        {"determinism", 60, plain(determinism)},
    };
    return list;
}

int run_one(std::size_t index) {
    const Criterion& c = criteria().at(index - 1);
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    int code = kFail;
    try {
        code = c.run(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
        code = kFail;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (code != kSkip) {
        o.check(secs < c.budget_seconds, "runtime " + fmt(std::round(secs * 10.0) / 10.0) + " s < " +
                                             fmt(c.budget_seconds) + " s");
        code = o.pass ? kPass : kFail;
    }
    std::cout << o.log.str();
    const char* verdict = code == kPass ? "PASS" : (code == kSkip ? "SKIP" : "FAIL");
    std::cout << "criterion " << index << " (" << c.name << "): " << verdict << std::endl;
    return code;
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t count = criteria().size();
    if (argc > 2) {
        std::cerr << "usage: hdboot_acceptance [criterion 1-" << count << "]\n";
        return 2;
    }
    if (argc == 2) {
        const long k = std::strtol(argv[1], nullptr, 10);
        if (k < 1 || static_cast<std::size_t>(k) > count) {
            std::cerr << "criterion must be in 1.." << count << '\n';
            return 2;
        }
        return run_one(static_cast<std::size_t>(k));
    }
    bool ok = true;
    for (std::size_t k = 1; k <= count; ++k) ok = run_one(k) != kFail && ok;
    return ok ? kPass : kFail;
}
