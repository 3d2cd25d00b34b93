#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "jcarray/disorder.hpp"
#include "jcarray/error.hpp"
#include "jcarray/params.hpp"
#include "jcarray/transfer.hpp"

namespace jcarray {

enum class RunMode : std::uint8_t { Single, Array, Bands, Disorder };
enum class OutputFormat : std::uint8_t { Csv, Json };

struct SweepSpec {
    double lo = 0.0;
    double hi = 0.0;
    int n_points = 0;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct RunConfig {
    RunMode mode = RunMode::Single;
    CqedParams params;
    LatticeSpec lattice;                 // Array / Bands / Disorder
    std::vector<double> band_l_values;   // Bands: one or more lattice constants
    DisorderSpec disorder;               // Disorder
    SweepSpec sweep;                     // delta sweep, or omega sweep for Bands
    std::string output_path;             // may be empty until the CLI supplies --out
    OutputFormat format = OutputFormat::Csv;
    std::string preset;                  // empty when none
    std::vector<std::string> warnings;   // metadata only, not part of identity

    bool operator==(const RunConfig& o) const {
        return mode == o.mode && params == o.params && lattice == o.lattice &&
               band_l_values == o.band_l_values && disorder == o.disorder && sweep == o.sweep &&
               output_path == o.output_path && format == o.format && preset == o.preset;
    }
};

inline const std::map<std::string, CqedParams>& table1_presets() {
    static const std::map<std::string, CqedParams> presets = {
        {"case1", {0.0, 0.0, 0.0, 1.0, 0.0, 1.0}},  // decoupled atoms, no loss
        {"case2", {0.0, 0.5, 0.5, 1.0, 0.0, 1.0}},  // decoupled atoms with losses
        {"case3", {0.25, 0.5, 0.5, 0.0, 0.0, 1.0}}, // weak coupling, no backscattering
        {"case4", {0.25, 0.5, 0.5, 2.0, 0.0, 1.0}}, // weak coupling, large backscattering
        {"case5", {5.0, 0.5, 0.5, 2.0, 0.0, 1.0}},  // strong coupling, large backscattering
        {"case6", {5.0, 0.5, 0.5, 2.0, 4.0, 1.0}},  // strong coupling, atom-cavity detuning
    };
    return presets;
}

namespace detail {
using json = nlohmann::json;

inline void require_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            throw Error(errc::unknown_key, where + "." + item.key());
}

inline double get_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw Error(errc::missing_field, where + "." + key);
    const json& v = obj.at(key);
    if (!v.is_number()) throw Error(errc::invalid_value, where + "." + key + " must be a number");
    return v.get<double>();
}

inline int get_int(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) throw Error(errc::missing_field, where + "." + key);
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw Error(errc::invalid_value, where + "." + key + " must be an integer");
    return v.get<int>();
}

// Type-invariant violations inside a config surface as InvalidValue, per the
// parse_config error contract.
template <typename T>
T validated(const T& value) {
    try {
        return validate(value);
    } catch (const Error& e) {
        throw Error(errc::invalid_value, e.what());
    }
}

inline RunMode parse_mode(const std::string& s) {
    if (s == "single") return RunMode::Single;
    if (s == "array") return RunMode::Array;
    if (s == "bands") return RunMode::Bands;
    if (s == "disorder") return RunMode::Disorder;
    throw Error(errc::invalid_value, "mode must be one of single|array|bands|disorder, got '" + s + "'");
}

inline const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::Single: return "single";
        case RunMode::Array: return "array";
        case RunMode::Bands: return "bands";
        case RunMode::Disorder: return "disorder";
    }
    return "?";
}

inline const char* format_name(OutputFormat f) {
    return f == OutputFormat::Csv ? "csv" : "json";
}
} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    using detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(errc::parse_error, e.what());
    }
    if (!root.is_object()) throw Error(errc::parse_error, "config root must be a JSON object");

    detail::require_keys(root, "config",
                         {"mode", "preset", "params", "lattice", "disorder", "sweep", "output"});

    if (!root.contains("mode")) throw Error(errc::missing_field, "config.mode");
    if (!root.at("mode").is_string()) throw Error(errc::invalid_value, "config.mode must be a string");
    RunConfig cfg;
    cfg.mode = detail::parse_mode(root.at("mode").get<std::string>());

    const bool needs_lattice = cfg.mode != RunMode::Single;
    const bool needs_disorder = cfg.mode == RunMode::Disorder;

    // preset expansion happens before field validation; explicit values win
    if (root.contains("preset")) {
        if (!root.at("preset").is_string())
            throw Error(errc::invalid_value, "config.preset must be a string");
        cfg.preset = root.at("preset").get<std::string>();
        const auto& presets = table1_presets();
        auto it = presets.find(cfg.preset);
        if (it == presets.end())
            throw Error(errc::invalid_value, "unknown preset '" + cfg.preset + "'");
        cfg.params = it->second;
    }

    if (root.contains("params")) {
        const json& pj = root.at("params");
        if (!pj.is_object()) throw Error(errc::invalid_value, "config.params must be an object");
        detail::require_keys(pj, "params", {"g", "kappa", "gamma", "eta", "delta_ac", "big_gamma"});
        auto take = [&](const char* key, double& field) {
            if (pj.contains(key)) {
                field = detail::get_number(pj, "params", key);
                if (!cfg.preset.empty())
                    cfg.warnings.push_back(std::string("params.") + key + " overrides preset " +
                                           cfg.preset);
            }
        };
        take("g", cfg.params.g);
        take("kappa", cfg.params.kappa);
        take("gamma", cfg.params.gamma);
        take("eta", cfg.params.eta);
        take("delta_ac", cfg.params.delta_ac);
        take("big_gamma", cfg.params.big_gamma);
    } else if (cfg.preset.empty()) {
        throw Error(errc::missing_field, "config.params (or a preset)");
    }
    detail::validated(cfg.params);

    if (root.contains("lattice") != needs_lattice)
        throw Error(needs_lattice ? errc::missing_field : errc::invalid_value,
                    needs_lattice ? "config.lattice"
                                  : "config.lattice is not used in single mode");
    if (needs_lattice) {
        const json& lj = root.at("lattice");
        if (!lj.is_object()) throw Error(errc::invalid_value, "config.lattice must be an object");
        detail::require_keys(lj, "lattice", {"n_sites", "l_over_lambda0", "phase_model", "rho"});
        if (cfg.mode == RunMode::Bands) {
            // bands may sweep several lattice constants; n_sites is not used
            if (lj.contains("n_sites")) cfg.lattice.n_sites = detail::get_int(lj, "lattice", "n_sites");
            if (!lj.contains("l_over_lambda0"))
                throw Error(errc::missing_field, "lattice.l_over_lambda0");
            const json& lv = lj.at("l_over_lambda0");
            if (lv.is_array()) {
                for (const json& e : lv) {
                    if (!e.is_number())
                        throw Error(errc::invalid_value, "lattice.l_over_lambda0 entries must be numbers");
                    cfg.band_l_values.push_back(e.get<double>());
                }
                if (cfg.band_l_values.empty())
                    throw Error(errc::invalid_value, "lattice.l_over_lambda0 array must be non-empty");
            } else if (lv.is_number()) {
                cfg.band_l_values.push_back(lv.get<double>());
            } else {
                throw Error(errc::invalid_value, "lattice.l_over_lambda0 must be a number or array");
            }
            cfg.lattice.l_over_lambda0 = cfg.band_l_values.front();
        } else {
            cfg.lattice.n_sites = detail::get_int(lj, "lattice", "n_sites");
            cfg.lattice.l_over_lambda0 = detail::get_number(lj, "lattice", "l_over_lambda0");
        }
        if (lj.contains("phase_model")) {
            if (!lj.at("phase_model").is_string())
                throw Error(errc::invalid_value, "lattice.phase_model must be a string");
            const std::string pm = lj.at("phase_model").get<std::string>();
            if (pm == "markovian")
                cfg.lattice.phase_model = PhaseModel::Markovian;
            else if (pm == "dispersive")
                cfg.lattice.phase_model = PhaseModel::Dispersive;
            else
                throw Error(errc::invalid_value, "lattice.phase_model must be markovian|dispersive");
        }
        if (lj.contains("rho")) cfg.lattice.rho = detail::get_number(lj, "lattice", "rho");
        detail::validated(cfg.lattice);
        for (double l : cfg.band_l_values)
            if (!(l > 0.0)) throw Error(errc::invalid_value, "lattice constants must be > 0");
    }

    if (root.contains("disorder") != needs_disorder)
        throw Error(needs_disorder ? errc::missing_field : errc::invalid_value,
                    needs_disorder ? "config.disorder"
                                   : "config.disorder is only used in disorder mode");
    if (needs_disorder) {
        const json& dj = root.at("disorder");
        if (!dj.is_object()) throw Error(errc::invalid_value, "config.disorder must be an object");
        detail::require_keys(dj, "disorder", {"sigma_over_l", "realizations", "seed", "clamp"});
        cfg.disorder.sigma_over_l = detail::get_number(dj, "disorder", "sigma_over_l");
        cfg.disorder.realizations = detail::get_int(dj, "disorder", "realizations");
        if (!dj.contains("seed")) throw Error(errc::missing_field, "disorder.seed");
        if (!dj.at("seed").is_number_integer() || dj.at("seed").get<double>() < 0)
            throw Error(errc::invalid_value, "disorder.seed must be a non-negative integer");
        cfg.disorder.seed = dj.at("seed").get<std::uint64_t>();
        if (dj.contains("clamp")) {
            if (!dj.at("clamp").is_boolean())
                throw Error(errc::invalid_value, "disorder.clamp must be a boolean");
            cfg.disorder.clamp = dj.at("clamp").get<bool>();
        }
        detail::validated(cfg.disorder);
    }

    if (!root.contains("sweep")) throw Error(errc::missing_field, "config.sweep");
    const json& sj = root.at("sweep");
    if (!sj.is_object()) throw Error(errc::invalid_value, "config.sweep must be an object");
    if (cfg.mode == RunMode::Bands) {
        detail::require_keys(sj, "sweep", {"omega_min", "omega_max", "n_points"});
        cfg.sweep.lo = detail::get_number(sj, "sweep", "omega_min");
        cfg.sweep.hi = detail::get_number(sj, "sweep", "omega_max");
    } else {
        detail::require_keys(sj, "sweep", {"delta_min", "delta_max", "n_points"});
        cfg.sweep.lo = detail::get_number(sj, "sweep", "delta_min");
        cfg.sweep.hi = detail::get_number(sj, "sweep", "delta_max");
    }
    cfg.sweep.n_points = detail::get_int(sj, "sweep", "n_points");
    if (!(cfg.sweep.lo < cfg.sweep.hi))
        throw Error(errc::invalid_value, "sweep bounds must satisfy min < max");
    const int min_points = cfg.mode == RunMode::Bands ? 100 : 2;
    if (cfg.sweep.n_points < min_points)
        throw Error(errc::invalid_value,
                    "sweep.n_points must be >= " + std::to_string(min_points));

    if (root.contains("output")) {
        const json& oj = root.at("output");
        if (!oj.is_object()) throw Error(errc::invalid_value, "config.output must be an object");
        detail::require_keys(oj, "output", {"path", "format"});
        if (oj.contains("path")) {
            if (!oj.at("path").is_string())
                throw Error(errc::invalid_value, "output.path must be a string");
            cfg.output_path = oj.at("path").get<std::string>();
        }
        if (oj.contains("format")) {
            if (!oj.at("format").is_string())
                throw Error(errc::invalid_value, "output.format must be a string");
            const std::string f = oj.at("format").get<std::string>();
            if (f == "csv")
                cfg.format = OutputFormat::Csv;
            else if (f == "json")
                cfg.format = OutputFormat::Json;
            else
                throw Error(errc::invalid_value, "output.format must be csv|json");
        }
    }
    return cfg;
}

inline std::string serialize_config(const RunConfig& cfg) {
    using detail::json;
    json root;
    root["mode"] = detail::mode_name(cfg.mode);
    if (!cfg.preset.empty()) root["preset"] = cfg.preset;
    root["params"] = {{"g", cfg.params.g},          {"kappa", cfg.params.kappa},
                      {"gamma", cfg.params.gamma},  {"eta", cfg.params.eta},
                      {"delta_ac", cfg.params.delta_ac}, {"big_gamma", cfg.params.big_gamma}};
    if (cfg.mode != RunMode::Single) {
        json lj;
        lj["n_sites"] = cfg.lattice.n_sites;
        if (cfg.mode == RunMode::Bands && cfg.band_l_values.size() > 1)
            lj["l_over_lambda0"] = cfg.band_l_values;
        else
            lj["l_over_lambda0"] = cfg.lattice.l_over_lambda0;
        lj["phase_model"] =
            cfg.lattice.phase_model == PhaseModel::Markovian ? "markovian" : "dispersive";
        lj["rho"] = cfg.lattice.rho;
        root["lattice"] = lj;
    }
    if (cfg.mode == RunMode::Disorder) {
        root["disorder"] = {{"sigma_over_l", cfg.disorder.sigma_over_l},
                            {"realizations", cfg.disorder.realizations},
                            {"seed", cfg.disorder.seed},
                            {"clamp", cfg.disorder.clamp}};
    }
    if (cfg.mode == RunMode::Bands)
        root["sweep"] = {{"omega_min", cfg.sweep.lo},
                         {"omega_max", cfg.sweep.hi},
                         {"n_points", cfg.sweep.n_points}};
    else
        root["sweep"] = {{"delta_min", cfg.sweep.lo},
                         {"delta_max", cfg.sweep.hi},
                         {"n_points", cfg.sweep.n_points}};
    if (!cfg.output_path.empty())
        root["output"] = {{"path", cfg.output_path}, {"format", detail::format_name(cfg.format)}};
    return root.dump(2) + "\n";
}

} // namespace jcarray
