#include "hdboot/sim/cli.hpp"

#include "hdboot/core/csv.hpp"
#include "hdboot/core/errors.hpp"
#include "hdboot/core/parallel.hpp"
#include "hdboot/gaussian/reference.hpp"
#include "hdboot/inference/cov_compare.hpp"
#include "hdboot/inference/simultaneous.hpp"
#include "hdboot/inference/stepdown.hpp"
#include "hdboot/lasso/penalty.hpp"
#include "hdboot/sim/experiments.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace hdboot::sim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
    std::string data;
    std::string out;
    double alpha = 0.05;
    std::string scheme = "gaussian-multiplier";
    std::size_t B = 999;
    std::uint64_t seed = 0;
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ofstream f(target, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << text;
}

DataMatrix load_matrix(const std::string& path) { return DataMatrix(read_csv(path).values); }

std::string ci_table(const inference::SimultaneousCI& ci, const Eigen::VectorXd& theta, std::optional<std::size_t> only) {
    std::ostringstream os;
    os << "index,estimate,lower,upper\n";
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
        if (only && static_cast<std::size_t>(j) != *only) continue;
        os << (j + 1) << ',' << format_double(theta[j]) << ',' << format_double(ci.lower[j]) << ','
           << format_double(ci.upper[j]) << '\n';
    }
    return os.str();
}

void add_common(CLI::App* cmd, Common& c, bool with_data = true) {
    if (with_data) cmd->add_option("--data", c.data, "CSV file with a header row")->required();
    cmd->add_option("--out", c.out, "Output file (stdout when omitted)");
    cmd->add_option("--alpha", c.alpha, "Significance level");
    cmd->add_option("--scheme", c.scheme,
                    "gaussian-multiplier, empirical, mammen-multiplier or rademacher-multiplier");
    cmd->add_option("--B", c.B, "Bootstrap replicates");
    cmd->add_option("--seed", c.seed, "Master seed");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"High-dimensional bootstrap inference and Monte Carlo experiments", "hdboot"};
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: HDBOOT_THREADS or all cores)");

    // simulate
    std::string config_path, out_dir;
    std::uint64_t sim_seed = 0;
    bool timing = false;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment described by a JSON file");
    simulate->add_option("--config", config_path, "Scenario JSON")->required();
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_option("--seed", sim_seed, "Master seed (overrides the file)")->required();
    simulate->add_flag("--timing", timing, "Include runtime_seconds in report.json");

    // ci
    Common ci_opt;
    std::size_t select = 0;
    auto* ci = app.add_subcommand("ci", "Simultaneous confidence intervals for the column means");
    add_common(ci, ci_opt);
    ci->add_option("--select", select, "Report only this (1-based) coordinate, chosen after seeing the data");

    // stepdown
    Common sd_opt;
    sd_opt.alpha = 0.1;
    bool one_sided = false, two_sided = false;
    auto* sd = app.add_subcommand("stepdown", "Stepdown tests of H_j: mean_j <= 0 with adjusted p-values");
    add_common(sd, sd_opt);
    auto* one_flag = sd->add_flag("--one-sided", one_sided, "Test mean_j <= 0 (default)");
    sd->add_flag("--two-sided", two_sided, "Test mean_j = 0")->excludes(one_flag);

    // covcmp
    Common cc_opt;
    cc_opt.B = 499;
    std::string x_path, y_path;
    auto* cc = app.add_subcommand("covcmp", "Two-sample test of equal covariance matrices");
    add_common(cc, cc_opt, false);
    cc->add_option("--x", x_path, "First sample CSV")->required();
    cc->add_option("--y", y_path, "Second sample CSV")->required();

    // rlasso
    Common rl_opt;
    rl_opt.alpha = 0.1;
    std::string mode = "heteroscedastic";
    std::size_t refinements = 2;
    bool center_data = false, sup_score = false;
    auto* rl = app.add_subcommand("rlasso", "Lasso with a bootstrap penalty; first CSV column is y");
    add_common(rl, rl_opt);
    rl->add_option("--mode", mode, "homoscedastic or heteroscedastic");
    rl->add_option("--refinements", refinements, "Penalty refinements");
    rl->add_flag("--center", center_data, "Center y and the design columns first");
    rl->add_flag("--sup-score", sup_score, "Also run the sup-score test of beta = 0");

    // rates
    double rate_B = 1.0, rate_n = 0.0, rate_p = 0.0;
    std::optional<double> rate_q;
    std::string rates_out;
    auto* rates = app.add_subcommand("rates", "Rate functionals delta1 and delta2");
    rates->add_option("--B", rate_B, "Moment constant B_n >= 1");
    rates->add_option("--n", rate_n, "Sample size")->required();
    rates->add_option("--p", rate_p, "Dimension")->required();
    rates->add_option("--q", rate_q, "Moment order q > 2 for delta2");
    rates->add_option("--out", rates_out, "Output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    try {
        if (threads > 0) set_thread_count(threads);

        if (simulate->parsed()) {
            ScenarioConfig cfg = load_config(config_path);
            cfg.seed = sim_seed;
            const MCReport rep = run_experiment(cfg);
            const fs::path dir(out_dir);
            fs::create_directories(dir);
            write_text((dir / "report.json").string(), report_to_json(rep, timing).dump(2) + "\n", out);
            for (const auto& [name, text] : rep.tables) write_text((dir / name).string(), text, out);
            out << to_string(cfg.experiment) << ": estimate " << format_double(rep.estimate) << " (mc_se "
                << format_double(rep.mc_se) << ")\n";
        } else if (ci->parsed()) {
            const auto panel = inference::mean_panel(load_matrix(ci_opt.data));
            const auto scheme = bootstrap::parse_scheme(ci_opt.scheme);
            std::optional<std::size_t> only;
            if (select > 0) {
                if (select > panel.p()) throw ConfigError("--select is out of range for p = " + std::to_string(panel.p()));
                only = select - 1;
            }
            const auto res = inference::simultaneous_ci(panel, ci_opt.alpha, scheme, ci_opt.B, ci_opt.seed);
            write_text(ci_opt.out, ci_table(res, panel.theta_hat(), only), out);
        } else if (sd->parsed()) {
            const auto panel = inference::mean_panel(load_matrix(sd_opt.data));
            const auto sides = two_sided ? inference::Sides::TwoSided : inference::Sides::OneSided;
            const auto res = inference::stepdown(panel, sd_opt.alpha, sides, bootstrap::parse_scheme(sd_opt.scheme),
                                                 sd_opt.B, sd_opt.seed);
            std::ostringstream os;
            inference::write_csv(os, res);
            write_text(sd_opt.out, os.str(), out);
            if (res.coarse_quantile) err << "warning: B is too small for this alpha; the critical value is the sample maximum\n";
            if (!sd_opt.out.empty()) out << res.rejected.size() << " hypotheses rejected\n";
        } else if (cc->parsed()) {
            const auto res = inference::cov_compare_test(load_matrix(x_path), load_matrix(y_path), cc_opt.alpha,
                                                         cc_opt.B, cc_opt.seed);
            if (res.unbalanced) err << "warning: sample sizes differ by more than a factor of 4\n";
            const json j{{"statistic", res.statistic},
                         {"critical_value", res.critical_value},
                         {"reject", res.reject},
                         {"pairs_tested", res.pairs_tested},
                         {"alpha", cc_opt.alpha},
                         {"B", cc_opt.B},
                         {"seed", cc_opt.seed}};
            write_text(cc_opt.out, j.dump(2) + "\n", out);
        } else if (rl->parsed()) {
            lasso::RegressionData d = lasso::load_regression_csv(rl_opt.data);
            if (center_data) d = lasso::center(d);
            lasso::RlassoOptions opts;
            opts.alpha = rl_opt.alpha;
            opts.mode = lasso::parse_noise_model(mode);
            opts.refinements = refinements;
            opts.B = rl_opt.B;
            opts.seed = rl_opt.seed;
            const auto fit = lasso::rlasso_pipeline(d, opts);
            json j{{"lambda", fit.lambda},
                   {"lambda_trace", fit.lambda_trace},
                   {"active_set", json::array()},
                   {"beta", std::vector<double>(fit.beta.data(), fit.beta.data() + fit.beta.size())},
                   {"objective", fit.objective},
                   {"iterations", fit.iterations}};
            for (const auto a : fit.active_set) j["active_set"].push_back(a + 1);
            if (sup_score) {
                const auto t = lasso::sup_score_test(d, rl_opt.alpha, rl_opt.B, rl_opt.seed);
                j["sup_score"] = {{"statistic", t.statistic}, {"critical_value", t.critical_value}, {"reject", t.reject}};
            }
            write_text(rl_opt.out, j.dump(2) + "\n", out);
        } else if (rates->parsed()) {
            RateInputs r;
            r.B_n = rate_B;
            r.q = rate_q;
            r.validate();
            std::ostringstream os;
            os << "n,p,B_n,q,delta1,delta2\n"
               << format_double(rate_n) << ',' << format_double(rate_p) << ',' << format_double(rate_B) << ','
               << (rate_q ? format_double(*rate_q) : "") << ',' << format_double(gaussian::rate_delta1(r, rate_n, rate_p))
               << ',' << (rate_q ? format_double(gaussian::rate_delta2(r, rate_n, rate_p)) : "") << '\n';
            write_text(rates_out, os.str(), out);
        }
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidDataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const lasso::NonConvergenceError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

} // namespace hdboot::sim
