#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liquidsim/ddpg.hpp"
#include "liquidsim/environment.hpp"
#include "liquidsim/market_params.hpp"
#include "liquidsim/rewards.hpp"

namespace liquidsim {

// Full experiment description: market assumptions, agents, reward scheme and
// training hyperparameters. Parsed from a `key = value` document; every
// field has a default reproducing the single-agent baseline setup.
struct ExperimentConfig {
    MarketAssumptions market;
    std::vector<AgentSpec> agents = {{1, 1e6, 1e-6}};
    RewardScheme scheme = RewardScheme::Independent;
    bool normalized_rewards = true;
    int lag_depth = 5;
    int episodes = 3000;
    int eval_episodes = 200;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    DdpgConfig ddpg;

    double total_agent_shares() const;
    MarketParams derive() const;  // market params with X = sum of agent shares
    void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

}  // namespace liquidsim
