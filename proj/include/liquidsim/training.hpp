#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "liquidsim/ddpg.hpp"
#include "liquidsim/environment.hpp"
#include "liquidsim/rewards.hpp"

namespace liquidsim {

// Builds a fresh environment for one episode from an episode seed.
using EnvFactory = std::function<MarketEnv(std::uint64_t)>;

// One market participant in a training or evaluation run: either a DDPG
// learner or a frozen scripted policy (fraction from observation and the
// number of trades remaining).
struct AgentSlot {
    DdpgAgent* learner = nullptr;
    std::function<double(const Observation&, int)> scripted;
};

// Sells a fixed 1/N_total of the initial position each period.
AgentSlot scripted_linear_seller();

struct TrainingLog {
    std::uint64_t base_seed = 0;
    std::vector<std::uint64_t> episode_seeds;
    // indexed [episode][agent]
    std::vector<std::vector<double>> shortfalls;
    std::vector<std::vector<double>> shaped_reward_sums;
    std::vector<std::vector<double>> mean_critic_losses;
    std::vector<std::vector<double>> mean_actor_objectives;
    // indexed [episode][agent][step 0..N]
    std::vector<std::vector<std::vector<double>>> trajectories;
    std::vector<bool> negative_price_flags;

    int episodes() const { return static_cast<int>(shortfalls.size()); }
    // Mean over the trailing `window` episodes of the per-agent shortfall sum.
    double trailing_mean_shortfall_sum(int window) const;
    double trailing_mean_shortfall(int agent_index, int window) const;
};

// Alg.-1-style loop: per step every agent acts with exploration, the
// environment advances once on the joint action vector, utility-difference
// rewards are shaped per scheme, transitions are stored per agent and every
// learner updates once. Deterministic under (seed, config).
TrainingLog run_training(const EnvFactory& env_factory, std::vector<AgentSlot>& slots,
                         RewardScheme scheme, int episodes, std::uint64_t seed,
                         bool normalized_rewards = true);

struct EvaluationResult {
    std::vector<double> mean_shortfall;
    std::vector<double> stdev_shortfall;
    // indexed [agent][step 0..N]
    std::vector<std::vector<double>> mean_trajectory;
    int episodes = 0;
};

// Exploration-off rollouts; learners are not updated.
EvaluationResult evaluate_policy(const EnvFactory& env_factory, std::vector<AgentSlot>& slots,
                                 int episodes, std::uint64_t seed);

}  // namespace liquidsim
