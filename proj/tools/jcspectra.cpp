// jcspectra: config-driven spectra for waveguide-coupled Jaynes-Cummings
// arrays. Subcommands: single, array, bands, disorder.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jcarray/jcarray.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "path to a JSON run config")->required();
    cmd->add_option("--out", opt.out_path, "output table path (overrides config output.path)");
    cmd->add_option("--format", opt.format, "csv|json (overrides config output.format)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opt.seed, "master seed override (disorder mode)");
    cmd->add_option("--threads", opt.threads,
                    "worker thread hint; never changes output bytes (0 = hardware)");
}

int run_subcommand(jcarray::RunMode mode, const CliOptions& opt) {
    using namespace jcarray;
    std::ifstream f(opt.config_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot read config '" << opt.config_path << "'\n";
        return 4;
    }
    std::ostringstream ss;
    ss << f.rdbuf();

    RunConfig cfg = parse_config(ss.str());
    if (cfg.mode != mode)
        throw Error(errc::invalid_value,
                    std::string("config mode '") + detail::mode_name(cfg.mode) +
                        "' does not match the requested subcommand");

    RunOverrides ov;
    if (!opt.out_path.empty()) ov.output_path = opt.out_path;
    if (!opt.format.empty())
        ov.format = opt.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    ov.seed = opt.seed;
    ov.threads = opt.threads;

    const RunResult res = run(cfg, ov);
    std::cerr << "wrote " << res.rows << " rows to " << res.output_path;
    if (res.flagged > 0) std::cerr << " (" << res.flagged << " flagged points)";
    std::cerr << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-photon transport in waveguide-coupled Jaynes-Cummings arrays"};
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* single = app.add_subcommand("single", "single-site transmission/reflection spectrum");
    CLI::App* array = app.add_subcommand("array", "finite periodic array spectrum");
    CLI::App* bands = app.add_subcommand("bands", "infinite-lattice band gaps");
    CLI::App* disorder = app.add_subcommand("disorder", "position-disorder ensemble statistics");
    for (CLI::App* cmd : {single, array, bands, disorder}) add_common_options(cmd, opt);

    CLI11_PARSE(app, argc, argv);

    jcarray::RunMode mode = jcarray::RunMode::Single;
    if (array->parsed()) mode = jcarray::RunMode::Array;
    if (bands->parsed()) mode = jcarray::RunMode::Bands;
    if (disorder->parsed()) mode = jcarray::RunMode::Disorder;

    try {
        return run_subcommand(mode, opt);
    } catch (const jcarray::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return jcarray::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
