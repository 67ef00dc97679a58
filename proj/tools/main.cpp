#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/util.hpp"

int main(int argc, char** argv) {
    CLI::App app{"repetition-based NOMA outage/error analysis and simulation"};
    app.require_subcommand(1);

    const std::map<std::string, std::function<int(const cli::RunConfig&)>> commands = {
        {"outage-sweep", cli::cmd_outage_sweep}, {"fbl-sweep", cli::cmd_fbl_sweep},
        {"moment-check", cli::cmd_moment_check}, {"plan", cli::cmd_plan},
        {"linklevel", cli::cmd_linklevel},       {"sic-sim", cli::cmd_sic_sim},
    };
    const std::map<std::string, std::string> descriptions = {
        {"outage-sweep", "Monte Carlo + closed-form outage over a (D, M, T, snr) grid"},
        {"fbl-sweep", "finite-blocklength average error over a (D, M, R, n, snr) grid"},
        {"moment-check", "interference-sum moment matching diagnostics"},
        {"plan", "per-layer thresholds/rates for a target outage"},
        {"linklevel", "symbol-interleaved QPSK link simulation"},
        {"sic-sim", "full-frame SIC simulation with error propagation"},
    };

    std::string config_path, out_path;
    std::uint64_t seed_opt = 0, trials_opt = 0;
    std::string selected;

    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
        sub->add_option("--config", config_path, "config file (JSON, one section per command)")
            ->required();
        sub->add_option("--seed", seed_opt, "override the config seed");
        sub->add_option("--trials", trials_opt, "override the config trial count");
        sub->add_option("--out", out_path, "override the output path");
        sub->callback([&selected, name = name] { selected = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints usage/diagnostic
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommand(selected);
        std::optional<std::uint64_t> seed_override, trials_override;
        if (sub->count("--seed")) seed_override = seed_opt;
        if (sub->count("--trials")) trials_override = trials_opt;
        std::string section = selected;  // config section names use underscores
        for (char& c : section)
            if (c == '-') c = '_';
        const cli::RunConfig cfg =
            cli::load_config(config_path, section, seed_override, trials_override, out_path);
        return commands.at(selected)(cfg);
    } catch (const cli::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
