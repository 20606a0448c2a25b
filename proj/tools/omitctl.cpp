#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omit/commands.hpp"
#include "omit/errors.hpp"
#include "omit/presets.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::string dump_config_path;
    bool svg = false;
    int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--preset", opts.preset,
                    "built-in scenario: baseline, fig2a, fig2bc, fig3a, fig3d, fig4");
    cmd->add_option("--set", opts.overrides,
                    "override a config key, e.g. --set params.gap=2nm")
        ->take_all();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_flag("--svg", opts.svg, "also render SVG line plots");
    cmd->add_option("--jobs", opts.jobs, "worker threads for sweep points")
        ->envname("OMITCTL_JOBS");
    cmd->add_option("--dump-config", opts.dump_config_path,
                    "write the effective configuration to this path");
}

omit::RunConfig resolve_config(const CommonOptions& opts) {
    omit::RunConfig config;
    bool have_base = false;
    if (!opts.preset.empty()) {
        config = omit::make_preset(opts.preset);
        have_base = true;
    }
    if (!opts.config_path.empty()) {
        config = omit::load_config_file(opts.config_path);
        have_base = true;
    }
    if (!have_base) {
        throw omit::Error(omit::ErrorKind::ConfigError,
                          "provide --config FILE or --preset NAME");
    }
    for (const auto& assignment : opts.overrides) {
        omit::apply_override(config, assignment);
    }
    if (!opts.out_dir.empty()) config.output.dir = opts.out_dir;
    if (opts.svg) config.output.svg = true;
    if (opts.jobs > 0) config.output.jobs = opts.jobs;
    if (!opts.dump_config_path.empty()) {
        std::ofstream out(opts.dump_config_path);
        out << omit::serialize_config(config);
    }
    return config;
}

void report_files(const std::vector<std::string>& files) {
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vacuum-force-controlled optomechanical transparency toolkit"};
    app.require_subcommand(1);

    CommonOptions info_opts, spectrum_opts, switch_opts, oracle_opts;
    CLI::App* info = app.add_subcommand(
        "info", "derived quantities, steady state and stability for a config");
    add_common(info, info_opts);
    CLI::App* spectrum = app.add_subcommand(
        "spectrum", "probe output rate versus detuning, written as CSV");
    add_common(spectrum, spectrum_opts);
    CLI::App* sw = app.add_subcommand(
        "switch", "resonant output rate versus mirror-sphere gap");
    add_common(sw, switch_opts);
    CLI::App* oracle = app.add_subcommand(
        "oracle", "time-domain cross-check of the analytic response");
    add_common(oracle, oracle_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (info->parsed()) {
            omit::run_info(resolve_config(info_opts), std::cout);
        } else if (spectrum->parsed()) {
            report_files(omit::run_spectrum(resolve_config(spectrum_opts)));
        } else if (sw->parsed()) {
            report_files(omit::run_switch(resolve_config(switch_opts)));
        } else if (oracle->parsed()) {
            report_files(omit::run_oracle(resolve_config(oracle_opts)));
        }
    } catch (const omit::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return err.exit_code();
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 4;
    }
    return 0;
}
