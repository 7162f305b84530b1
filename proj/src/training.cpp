#include "liquidsim/training.hpp"

#include <algorithm>
#include <cmath>

#include "liquidsim/errors.hpp"

namespace liquidsim {

AgentSlot scripted_linear_seller() {
    AgentSlot slot;
    slot.scripted = [](const Observation&, int steps_remaining) {
        return 1.0 / static_cast<double>(steps_remaining);
    };
    return slot;
}

double TrainingLog::trailing_mean_shortfall_sum(int window) const {
    const int n = episodes();
    if (n == 0 || window < 1) return 0.0;
    const int from = std::max(0, n - window);
    double acc = 0.0;
    for (int e = from; e < n; ++e)
        for (double s : shortfalls[static_cast<std::size_t>(e)]) acc += s;
    return acc / static_cast<double>(n - from);
}

double TrainingLog::trailing_mean_shortfall(int agent_index, int window) const {
    const int n = episodes();
    if (n == 0 || window < 1) return 0.0;
    const int from = std::max(0, n - window);
    double acc = 0.0;
    for (int e = from; e < n; ++e)
        acc += shortfalls[static_cast<std::size_t>(e)][static_cast<std::size_t>(agent_index)];
    return acc / static_cast<double>(n - from);
}

namespace {

double pick_action(AgentSlot& slot, const Observation& obs, int steps_remaining,
                   bool explore) {
    if (slot.learner) return slot.learner->act(obs, explore);
    if (!slot.scripted) throw UnsupportedConfiguration("agent slot has no policy");
    return std::clamp(slot.scripted(obs, steps_remaining), 0.0, 1.0);
}

}  // namespace

TrainingLog run_training(const EnvFactory& env_factory, std::vector<AgentSlot>& slots,
                         RewardScheme scheme, int episodes, std::uint64_t seed,
                         bool normalized_rewards) {
    TrainingLog log;
    log.base_seed = seed;
    if (episodes <= 0) return log;

    for (int episode = 0; episode < episodes; ++episode) {
        const std::uint64_t episode_seed =
            child_seed(seed, 0xE9150000ULL + static_cast<std::uint64_t>(episode));
        MarketEnv env = env_factory(episode_seed);
        const int num_agents = env.num_agents();
        if (static_cast<int>(slots.size()) != num_agents)
            throw UnsupportedConfiguration("one agent slot per environment agent required");
        const MarketParams& params = env.params();
        const int total_steps = params.num_trades;

        for (auto& slot : slots)
            if (slot.learner) slot.learner->begin_episode();

        std::vector<Observation> obs;
        obs.reserve(static_cast<std::size_t>(num_agents));
        for (int j = 1; j <= num_agents; ++j) obs.push_back(env.observe(j));

        std::vector<std::vector<double>> episode_traj(
            static_cast<std::size_t>(num_agents));
        for (int j = 0; j < num_agents; ++j)
            episode_traj[static_cast<std::size_t>(j)].push_back(
                env.state().holdings[static_cast<std::size_t>(j)]);

        std::vector<double> reward_sums(static_cast<std::size_t>(num_agents), 0.0);
        std::vector<double> loss_sums(static_cast<std::size_t>(num_agents), 0.0);
        std::vector<double> objective_sums(static_cast<std::size_t>(num_agents), 0.0);
        std::vector<int> learn_counts(static_cast<std::size_t>(num_agents), 0);

        std::vector<double> actions(static_cast<std::size_t>(num_agents), 0.0);
        std::vector<double> raw(static_cast<std::size_t>(num_agents), 0.0);

        for (int t = 0; t < total_steps; ++t) {
            const int steps_remaining = total_steps - t;
            const std::vector<double> holdings_before = env.state().holdings;

            for (int j = 0; j < num_agents; ++j)
                actions[static_cast<std::size_t>(j)] = pick_action(
                    slots[static_cast<std::size_t>(j)], obs[static_cast<std::size_t>(j)],
                    steps_remaining, /*explore=*/true);

            auto [next_obs, step_result] = env.step(actions);

            for (int j = 0; j < num_agents; ++j) {
                const auto& spec = env.agents()[static_cast<std::size_t>(j)];
                raw[static_cast<std::size_t>(j)] =
                    utility_reward(holdings_before[static_cast<std::size_t>(j)],
                                   env.state().holdings[static_cast<std::size_t>(j)],
                                   steps_remaining, spec.risk_aversion, params,
                                   normalized_rewards)
                        .value;
            }
            const RewardSet rewards = shape_rewards(scheme, raw);

            for (int j = 0; j < num_agents; ++j) {
                auto& slot = slots[static_cast<std::size_t>(j)];
                reward_sums[static_cast<std::size_t>(j)] +=
                    rewards.shaped[static_cast<std::size_t>(j)];
                episode_traj[static_cast<std::size_t>(j)].push_back(
                    env.state().holdings[static_cast<std::size_t>(j)]);
                if (!slot.learner) continue;
                Transition tr;
                tr.observation = obs[static_cast<std::size_t>(j)].to_vector();
                tr.action = step_result.applied_actions[static_cast<std::size_t>(j)];
                tr.reward = rewards.shaped[static_cast<std::size_t>(j)];
                tr.next_observation = next_obs[static_cast<std::size_t>(j)].to_vector();
                tr.terminal = step_result.terminal;
                slot.learner->store(std::move(tr));
                const auto lr = slot.learner->learn();
                if (lr.learned) {
                    loss_sums[static_cast<std::size_t>(j)] += lr.critic_loss;
                    objective_sums[static_cast<std::size_t>(j)] += lr.actor_objective;
                    learn_counts[static_cast<std::size_t>(j)] += 1;
                }
            }
            obs = std::move(next_obs);
        }

        for (auto& slot : slots)
            if (slot.learner) slot.learner->end_episode();

        std::vector<double> shortfalls(static_cast<std::size_t>(num_agents), 0.0);
        for (int j = 0; j < num_agents; ++j)
            shortfalls[static_cast<std::size_t>(j)] = env.realized_shortfall(j + 1);

        std::vector<double> mean_losses(static_cast<std::size_t>(num_agents), 0.0);
        std::vector<double> mean_objectives(static_cast<std::size_t>(num_agents), 0.0);
        for (int j = 0; j < num_agents; ++j) {
            if (learn_counts[static_cast<std::size_t>(j)] > 0) {
                mean_losses[static_cast<std::size_t>(j)] =
                    loss_sums[static_cast<std::size_t>(j)] /
                    learn_counts[static_cast<std::size_t>(j)];
                mean_objectives[static_cast<std::size_t>(j)] =
                    objective_sums[static_cast<std::size_t>(j)] /
                    learn_counts[static_cast<std::size_t>(j)];
            }
        }

        log.episode_seeds.push_back(episode_seed);
        log.shortfalls.push_back(std::move(shortfalls));
        log.shaped_reward_sums.push_back(reward_sums);
        log.mean_critic_losses.push_back(std::move(mean_losses));
        log.mean_actor_objectives.push_back(std::move(mean_objectives));
        log.trajectories.push_back(std::move(episode_traj));
        log.negative_price_flags.push_back(env.negative_price_flagged());
    }
    return log;
}

EvaluationResult evaluate_policy(const EnvFactory& env_factory, std::vector<AgentSlot>& slots,
                                 int episodes, std::uint64_t seed) {
    EvaluationResult result;
    result.episodes = episodes;
    if (episodes <= 0) return result;

    std::vector<double> sum_shortfall;
    std::vector<double> sum_sq_shortfall;
    std::vector<std::vector<double>> traj_sums;

    for (int episode = 0; episode < episodes; ++episode) {
        const std::uint64_t episode_seed =
            child_seed(seed, 0xEA110000ULL + static_cast<std::uint64_t>(episode));
        MarketEnv env = env_factory(episode_seed);
        const int num_agents = env.num_agents();
        if (static_cast<int>(slots.size()) != num_agents)
            throw UnsupportedConfiguration("one agent slot per environment agent required");
        const int total_steps = env.params().num_trades;
        if (sum_shortfall.empty()) {
            sum_shortfall.assign(static_cast<std::size_t>(num_agents), 0.0);
            sum_sq_shortfall.assign(static_cast<std::size_t>(num_agents), 0.0);
            traj_sums.assign(static_cast<std::size_t>(num_agents),
                             std::vector<double>(static_cast<std::size_t>(total_steps) + 1, 0.0));
        }

        std::vector<Observation> obs;
        for (int j = 1; j <= num_agents; ++j) obs.push_back(env.observe(j));
        for (int j = 0; j < num_agents; ++j)
            traj_sums[static_cast<std::size_t>(j)][0] +=
                env.state().holdings[static_cast<std::size_t>(j)];

        std::vector<double> actions(static_cast<std::size_t>(num_agents), 0.0);
        for (int t = 0; t < total_steps; ++t) {
            const int steps_remaining = total_steps - t;
            for (int j = 0; j < num_agents; ++j)
                actions[static_cast<std::size_t>(j)] = pick_action(
                    slots[static_cast<std::size_t>(j)], obs[static_cast<std::size_t>(j)],
                    steps_remaining, /*explore=*/false);
            auto [next_obs, step_result] = env.step(actions);
            for (int j = 0; j < num_agents; ++j)
                traj_sums[static_cast<std::size_t>(j)][static_cast<std::size_t>(t) + 1] +=
                    env.state().holdings[static_cast<std::size_t>(j)];
            obs = std::move(next_obs);
        }
        for (int j = 0; j < num_agents; ++j) {
            const double s = env.realized_shortfall(j + 1);
            sum_shortfall[static_cast<std::size_t>(j)] += s;
            sum_sq_shortfall[static_cast<std::size_t>(j)] += s * s;
        }
    }

    const double n = static_cast<double>(episodes);
    const std::size_t num_agents = sum_shortfall.size();
    result.mean_shortfall.resize(num_agents);
    result.stdev_shortfall.resize(num_agents);
    result.mean_trajectory.resize(num_agents);
    for (std::size_t j = 0; j < num_agents; ++j) {
        const double mean = sum_shortfall[j] / n;
        result.mean_shortfall[j] = mean;
        const double var = std::max(0.0, sum_sq_shortfall[j] / n - mean * mean);
        result.stdev_shortfall[j] = std::sqrt(var);
        result.mean_trajectory[j] = traj_sums[j];
        for (double& h : result.mean_trajectory[j]) h /= n;
    }
    return result;
}

}  // namespace liquidsim
