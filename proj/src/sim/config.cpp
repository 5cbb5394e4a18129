#include "hdboot/sim/config.hpp"

#include "hdboot/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hdboot::sim {

using nlohmann::json;

namespace {

constexpr ExperimentKind kAllKinds[] = {
    ExperimentKind::PP,         ExperimentKind::Coverage,     ExperimentKind::Fwer,
    ExperimentKind::Rate,       ExperimentKind::CovcmpSize,   ExperimentKind::SupscoreSize,
    ExperimentKind::LassoRate,  ExperimentKind::Comparison,   ExperimentKind::Anticoncentration,
};

std::set<std::string> experiment_keys(ExperimentKind kind) {
    std::set<std::string> keys{"experiment", "dgp", "n", "p", "reps", "B", "alpha", "scheme", "seed"};
    switch (kind) {
    case ExperimentKind::PP:
    case ExperimentKind::Rate: keys.insert("n_grid"); break;
    case ExperimentKind::Fwer: keys.insert({"alternatives", "signal", "sides"}); break;
    case ExperimentKind::CovcmpSize: keys.insert("m"); break;
    case ExperimentKind::LassoRate: keys.insert({"np_grid", "sparsity", "signal", "refinements"}); break;
    case ExperimentKind::Comparison: keys.insert("deltas"); break;
    case ExperimentKind::Anticoncentration: keys.insert({"delta", "t_grid"}); break;
    case ExperimentKind::Coverage:
    case ExperimentKind::SupscoreSize: break;
    }
    return keys;
}

std::string dgp_parameter(DgpKind kind) {
    switch (kind) {
    case DgpKind::Figure1Regression: return "epsilon";
    case DgpKind::GaussianEquicorrelated: return "rho";
    case DgpKind::HeavyTailT: return "df";
    case DgpKind::DuplicatedCoordinates: return "k";
    case DgpKind::VarianceDecay: return "a";
    }
    return {};
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

std::size_t get_count(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) throw ConfigError("'" + key + "' must be a nonnegative integer");
    return v.get<std::size_t>();
}

double get_real(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
}

std::string get_string(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> get_reals(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError("'" + key + "' must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::size_t> get_counts(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_array()) throw ConfigError("'" + key + "' must be an array of integers");
    std::vector<std::size_t> out;
    for (const auto& x : v) {
        if (!x.is_number_unsigned()) throw ConfigError("'" + key + "' must be an array of nonnegative integers");
        out.push_back(x.get<std::size_t>());
    }
    return out;
}

DgpSpec dgp_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("'dgp' must be an object");
    DgpSpec spec;
    spec.kind = parse_dgp(get_string(j, "name"));
    const std::string param = dgp_parameter(spec.kind);
    reject_unknown(j, {"name", param}, "dgp");
    if (j.contains(param)) {
        switch (spec.kind) {
        case DgpKind::Figure1Regression: spec.epsilon_override = get_real(j, param); break;
        case DgpKind::GaussianEquicorrelated: spec.rho = get_real(j, param); break;
        case DgpKind::HeavyTailT: spec.df = get_real(j, param); break;
        case DgpKind::DuplicatedCoordinates: spec.k = get_count(j, param); break;
        case DgpKind::VarianceDecay: spec.a = get_real(j, param); break;
        }
    }
    spec.validate();
    return spec;
}

json dgp_to_json(const DgpSpec& spec) {
    json j{{"name", to_string(spec.kind)}};
    switch (spec.kind) {
    case DgpKind::Figure1Regression:
        if (spec.epsilon_override) j["epsilon"] = *spec.epsilon_override;
        break;
    case DgpKind::GaussianEquicorrelated: j["rho"] = spec.rho; break;
    case DgpKind::HeavyTailT: j["df"] = spec.df; break;
    case DgpKind::DuplicatedCoordinates: j["k"] = spec.k; break;
    case DgpKind::VarianceDecay: j["a"] = spec.a; break;
    }
    return j;
}

std::string sides_name(inference::Sides s) { return s == inference::Sides::OneSided ? "one-sided" : "two-sided"; }

} // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::PP: return "pp";
    case ExperimentKind::Coverage: return "coverage";
    case ExperimentKind::Fwer: return "fwer";
    case ExperimentKind::Rate: return "rate";
    case ExperimentKind::CovcmpSize: return "covcmp_size";
    case ExperimentKind::SupscoreSize: return "supscore_size";
    case ExperimentKind::LassoRate: return "lasso_rate";
    case ExperimentKind::Comparison: return "comparison";
    case ExperimentKind::Anticoncentration: return "anticoncentration";
    }
    return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
    for (const auto k : kAllKinds) {
        if (name == to_string(k)) return k;
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

void ScenarioConfig::validate() const {
    dgp.validate();
    if (n < 2) throw ConfigError("n must be >= 2");
    if (p < 1) throw ConfigError("p must be >= 1");
    if (reps < 1) throw ConfigError("reps must be >= 1");
    if (B < 1) throw ConfigError("B must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    for (const auto v : n_grid) {
        if (v < 2) throw ConfigError("every n_grid entry must be >= 2");
    }
    for (const auto& np : np_grid) {
        if (np[0] < 2 || np[1] < 1) throw ConfigError("every np_grid entry needs n >= 2 and p >= 1");
    }
    switch (experiment) {
    case ExperimentKind::Rate:
        if (n_grid.size() < 2) throw ConfigError("rate needs an n_grid with at least two sizes");
        break;
    case ExperimentKind::Fwer:
        if (alternatives > p) throw ConfigError("alternatives cannot exceed p");
        if (!std::isfinite(signal)) throw ConfigError("signal must be finite");
        break;
    case ExperimentKind::LassoRate:
        if (np_grid.empty()) throw ConfigError("lasso_rate needs a nonempty np_grid");
        if (refinements < 1) throw ConfigError("refinements must be >= 1");
        for (const auto& np : np_grid) {
            if (sparsity > np[1]) throw ConfigError("sparsity exceeds p in np_grid");
            if (np[1] < 2) throw ConfigError("lasso_rate needs p >= 2 in every cell");
        }
        break;
    case ExperimentKind::Comparison:
        if (deltas.empty()) throw ConfigError("comparison needs a nonempty deltas list");
        for (const auto d : deltas) {
            if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("every delta must lie in [0, 1]");
        }
        break;
    case ExperimentKind::Anticoncentration:
        if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be positive");
        if (t_grid.empty()) throw ConfigError("anticoncentration needs a nonempty t_grid");
        if (p < 2) throw ConfigError("anticoncentration needs p >= 2");
        break;
    case ExperimentKind::PP:
    case ExperimentKind::Coverage:
    case ExperimentKind::CovcmpSize:
    case ExperimentKind::SupscoreSize: break;
    }
}

ScenarioConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    ScenarioConfig cfg;
    cfg.experiment = parse_experiment(get_string(j, "experiment"));
    reject_unknown(j, experiment_keys(cfg.experiment), "configuration");

    if (j.contains("dgp")) cfg.dgp = dgp_from_json(j.at("dgp"));
    if (j.contains("n")) cfg.n = get_count(j, "n");
    if (j.contains("p")) cfg.p = get_count(j, "p");
    if (j.contains("reps")) cfg.reps = get_count(j, "reps");
    if (j.contains("B")) cfg.B = get_count(j, "B");
    if (j.contains("alpha")) cfg.alpha = get_real(j, "alpha");
    if (j.contains("scheme")) cfg.scheme = bootstrap::parse_scheme(get_string(j, "scheme"));
    if (j.contains("seed")) cfg.seed = get_count(j, "seed");
    if (j.contains("n_grid")) cfg.n_grid = get_counts(j, "n_grid");
    if (j.contains("np_grid")) {
        const json& g = j.at("np_grid");
        if (!g.is_array()) throw ConfigError("'np_grid' must be an array of [n, p] pairs");
        for (const auto& cell : g) {
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number_unsigned() || !cell[1].is_number_unsigned()) {
                throw ConfigError("'np_grid' must be an array of [n, p] pairs");
            }
            cfg.np_grid.push_back({cell[0].get<std::size_t>(), cell[1].get<std::size_t>()});
        }
    }
    if (j.contains("alternatives")) cfg.alternatives = get_count(j, "alternatives");
    if (j.contains("signal")) cfg.signal = get_real(j, "signal");
    if (j.contains("sides")) cfg.sides = inference::parse_sides(get_string(j, "sides"));
    if (j.contains("m")) cfg.m = get_count(j, "m");
    if (j.contains("sparsity")) cfg.sparsity = get_count(j, "sparsity");
    if (j.contains("refinements")) cfg.refinements = get_count(j, "refinements");
    if (j.contains("deltas")) cfg.deltas = get_reals(j, "deltas");
    if (j.contains("delta")) cfg.delta = get_real(j, "delta");
    if (j.contains("t_grid")) cfg.t_grid = get_reals(j, "t_grid");
    cfg.validate();
    return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
    json j{{"experiment", to_string(cfg.experiment)},
           {"dgp", dgp_to_json(cfg.dgp)},
           {"n", cfg.n},
           {"p", cfg.p},
           {"reps", cfg.reps},
           {"B", cfg.B},
           {"alpha", cfg.alpha},
           {"scheme", bootstrap::to_string(cfg.scheme)},
           {"seed", cfg.seed}};
    switch (cfg.experiment) {
    case ExperimentKind::PP:
    case ExperimentKind::Rate: j["n_grid"] = cfg.n_grid; break;
    case ExperimentKind::Fwer:
        j["alternatives"] = cfg.alternatives;
        j["signal"] = cfg.signal;
        j["sides"] = sides_name(cfg.sides);
        break;
    case ExperimentKind::CovcmpSize: j["m"] = cfg.m; break;
    case ExperimentKind::LassoRate:
        j["np_grid"] = cfg.np_grid;
        j["sparsity"] = cfg.sparsity;
        j["signal"] = cfg.signal;
        j["refinements"] = cfg.refinements;
        break;
    case ExperimentKind::Comparison: j["deltas"] = cfg.deltas; break;
    case ExperimentKind::Anticoncentration:
        j["delta"] = cfg.delta;
        j["t_grid"] = cfg.t_grid;
        break;
    case ExperimentKind::Coverage:
    case ExperimentKind::SupscoreSize: break;
    }
    return j;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

} // namespace hdboot::sim
