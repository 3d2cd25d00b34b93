#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jcarray/bloch.hpp"
#include "jcarray/config.hpp"
#include "jcarray/disorder.hpp"
#include "jcarray/error.hpp"
#include "jcarray/transfer.hpp"
#include "jcarray/version.hpp"

namespace jcarray {

// 17 significant digits: lossless round-trip of IEEE doubles, so data tables
// are byte-stable regression baselines.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Column-typed table shared by the CSV and JSON writers.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<bool> integer_column;
    std::vector<std::vector<double>> rows;

    void add_row(std::initializer_list<double> vals) { rows.emplace_back(vals); }
};

inline std::string to_csv(const ResultTable& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += t.columns[c];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (t.integer_column[c])
                out += std::to_string(static_cast<long long>(row[c]));
            else
                out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

inline std::string to_json_table(const ResultTable& t) {
    nlohmann::json root;
    root["columns"] = t.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (t.integer_column[c])
                r.push_back(static_cast<long long>(row[c]));
            else
                r.push_back(row[c]);
        }
        rows.push_back(std::move(r));
    }
    root["rows"] = std::move(rows);
    return root.dump(2) + "\n";
}

struct RunOverrides {
    std::optional<std::string> output_path;
    std::optional<OutputFormat> format;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1; // hint only; must not change output bytes
};

struct RunResult {
    std::string output_path;
    std::size_t rows = 0;
    std::size_t flagged = 0;
};

namespace detail {

inline ResultTable spectrum_table(const std::vector<SpectrumPoint>& pts) {
    ResultTable t;
    t.columns = {"delta", "T", "R", "flag"};
    t.integer_column = {false, false, false, true};
    for (const auto& p : pts) t.add_row({p.delta, p.T, p.R, p.flag ? 1.0 : 0.0});
    return t;
}

inline std::vector<SpectrumPoint> single_site_spectrum(const CqedParams& p, const SweepSpec& sw) {
    std::vector<SpectrumPoint> out;
    out.reserve(static_cast<std::size_t>(sw.n_points));
    const double h = (sw.hi - sw.lo) / (sw.n_points - 1);
    for (int k = 0; k < sw.n_points; ++k) {
        const Detuning d{sw.lo + k * h};
        const ScatteringAmplitudes amps = t_r_general(p, d);
        out.push_back({d.delta, amps.T, amps.R, false});
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(errc::io_error, "cannot open '" + path + "' for writing");
    f << contents;
    if (!f) throw Error(errc::io_error, "failed writing '" + path + "'");
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

} // namespace detail

// Execute a validated config: write the data table plus a metadata sidecar
// (<path>.meta.json). Throws jcarray::Error on failure.
inline RunResult run(RunConfig cfg, const RunOverrides& ov = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    bool seed_overridden = false;
    if (ov.output_path) cfg.output_path = *ov.output_path;
    if (ov.format) cfg.format = *ov.format;
    if (ov.seed && cfg.mode == RunMode::Disorder) {
        seed_overridden = cfg.disorder.seed != *ov.seed;
        cfg.disorder.seed = *ov.seed;
    }
    if (cfg.output_path.empty())
        throw Error(errc::missing_field, "output path (config output.path or --out)");

    ResultTable table;
    switch (cfg.mode) {
        case RunMode::Single:
            table = detail::spectrum_table(detail::single_site_spectrum(cfg.params, cfg.sweep));
            break;
        case RunMode::Array:
            table = detail::spectrum_table(
                array_spectrum(cfg.params, cfg.lattice, cfg.sweep.lo, cfg.sweep.hi, cfg.sweep.n_points));
            break;
        case RunMode::Bands: {
            table.columns = {"L_over_lambda0", "omega_lo", "omega_hi", "width"};
            table.integer_column = {false, false, false, false};
            for (double l : cfg.band_l_values) {
                LatticeSpec spec = cfg.lattice;
                spec.l_over_lambda0 = l;
                for (const BandGap& g :
                     find_band_gaps(cfg.params, spec, cfg.sweep.lo, cfg.sweep.hi, cfg.sweep.n_points))
                    table.add_row({l, g.omega_lo, g.omega_hi, g.width});
            }
            break;
        }
        case RunMode::Disorder: {
            table.columns = {"delta", "mean_T", "stderr_T", "mean_R", "stderr_R", "m_effective"};
            table.integer_column = {false, false, false, false, false, true};
            for (const DisorderStats& st :
                 ensemble_average(cfg.params, cfg.lattice, cfg.disorder, cfg.sweep.lo, cfg.sweep.hi,
                                  cfg.sweep.n_points, ov.threads))
                table.add_row({st.delta, st.mean_T, st.stderr_T, st.mean_R, st.stderr_R,
                               static_cast<double>(st.m_effective)});
            break;
        }
    }

    std::size_t flagged = 0;
    if (cfg.mode == RunMode::Single || cfg.mode == RunMode::Array)
        for (const auto& row : table.rows) flagged += row[3] != 0.0 ? 1u : 0u;

    detail::write_file(cfg.output_path,
                       cfg.format == OutputFormat::Csv ? to_csv(table) : to_json_table(table));

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    nlohmann::json meta;
    meta["artifact"] = {{"name", kArtifactName}, {"version", kArtifactVersion}};
    meta["config"] = nlohmann::json::parse(serialize_config(cfg));
    meta["seed_overridden"] = seed_overridden;
    meta["threads_hint"] = ov.threads;
    meta["warnings"] = cfg.warnings;
    meta["rows"] = table.rows.size();
    meta["flagged_points"] = flagged;
    meta["timestamp_utc"] = detail::utc_timestamp();
    meta["wall_clock_seconds"] = wall;
    detail::write_file(cfg.output_path + ".meta.json", meta.dump(2) + "\n");

    return {cfg.output_path, table.rows.size(), flagged};
}

// Exit-code category for the CLI: 2 config, 3 computation, 4 I/O.
inline int exit_code_for(errc c) {
    switch (c) {
        case errc::parse_error:
        case errc::unknown_key:
        case errc::missing_field:
        case errc::invalid_value:
        case errc::negative_rate:
        case errc::non_positive_unit:
            return 2;
        case errc::io_error:
            return 4;
        default:
            return 3;
    }
}

} // namespace jcarray
