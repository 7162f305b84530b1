// liquidsim command-line front end: analytic oracles, theorem verification,
// DDPG training runs and the figure-style experiment presets, all emitting
// deterministic CSV files.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "liquidsim/config.hpp"
#include "liquidsim/errors.hpp"
#include "liquidsim/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent optimal-liquidation simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> episodes;

    for (const auto& name : liquidsim::known_commands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file (key = value lines)");
        sub->add_option("--seed", seed, "RNG seed (overrides config)");
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--episodes", episodes, "training episodes (overrides config)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        liquidsim::ExperimentConfig config;
        if (!config_path.empty()) config = liquidsim::load_config_file(config_path);
        if (seed) config.seed = *seed;
        if (out_dir) config.out_dir = *out_dir;
        if (episodes) config.episodes = *episodes;

        const liquidsim::RunResult result = liquidsim::run_command(command, config);
        for (const auto& artifact : result.artifacts)
            std::cout << artifact.path << " (" << artifact.row_count << " rows)\n";
        if (result.exit_code != 0) std::cerr << command << ": verification failed\n";
        return result.exit_code;
    } catch (const liquidsim::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const liquidsim::UnsupportedConfiguration& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
