#pragma once

#include <string>
#include <vector>

#include "liquidsim/config.hpp"
#include "liquidsim/csv.hpp"

namespace liquidsim {

struct RunResult {
    int exit_code = 0;  // 0 ok, 1 verification failure, 2 configuration error
    std::vector<CsvArtifact> artifacts;
};

// Commands: analytic, verify-theorems, train, evaluate, fig2, fig3, fig4,
// fig5. Every command is a pure function of (config, seed) to CSV artifacts
// under config.out_dir.
RunResult run_command(const std::string& command, const ExperimentConfig& config);

std::vector<std::string> known_commands();

}  // namespace liquidsim
