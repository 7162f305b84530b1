#include "liquidsim/environment.hpp"

#include <algorithm>
#include <cmath>

#include "liquidsim/errors.hpp"

namespace liquidsim {

std::vector<double> Observation::to_vector() const {
    std::vector<double> v;
    v.reserve(log_returns.size() + 2);
    v.insert(v.end(), log_returns.begin(), log_returns.end());
    v.push_back(trades_remaining_frac);
    v.push_back(own_holdings_frac);
    return v;
}

MarketEnv MarketEnv::create(const MarketParams& params, std::vector<AgentSpec> agents,
                            int lag_depth, std::uint64_t seed, bool noise_enabled) {
    params.validate();
    if (agents.empty()) throw InvalidParameter("agent list must be non-empty");
    if (lag_depth < 1) throw InvalidParameter("lag_depth must be >= 1");
    for (std::size_t j = 0; j < agents.size(); ++j) {
        if (agents[j].agent_id != static_cast<int>(j) + 1)
            throw InvalidParameter("agent ids must be contiguous starting at 1");
        if (!(agents[j].initial_shares >= 0.0))
            throw InvalidParameter("agent initial_shares must be >= 0");
        if (agents[j].risk_aversion < 0.0)
            throw InvalidParameter("agent risk_aversion must be >= 0");
    }

    MarketEnv env;
    env.params_ = params;
    env.agents_ = std::move(agents);
    env.lag_depth_ = lag_depth;
    env.noise_enabled_ = noise_enabled;
    env.state_.step_index = 0;
    env.state_.price = params.initial_price;
    env.state_.holdings.reserve(env.agents_.size());
    for (const auto& a : env.agents_) env.state_.holdings.push_back(a.initial_shares);
    env.state_.captures.assign(env.agents_.size(), 0.0);
    env.state_.rng.seed(seed);
    return env;
}

int MarketEnv::agent_index(int agent_id) const {
    if (agent_id < 1 || agent_id > static_cast<int>(agents_.size()))
        throw InvalidParameter("unknown agent id");
    return agent_id - 1;
}

std::pair<std::vector<Observation>, StepResult> MarketEnv::step(
    const std::vector<double>& actions) {
    if (terminal()) throw EpisodeFinished("step() on a finished episode");
    if (actions.size() != agents_.size())
        throw InvalidAction("one action per agent required");
    for (double a : actions)
        if (!std::isfinite(a)) throw InvalidAction("non-finite action");

    const bool last_step = state_.step_index + 1 == params_.num_trades;
    const std::size_t num_agents = agents_.size();

    StepResult result;
    result.executed.resize(num_agents);
    result.applied_actions.resize(num_agents);
    result.per_agent_proceeds.resize(num_agents);

    double aggregate = 0.0;
    for (std::size_t j = 0; j < num_agents; ++j) {
        // the final period always clears any remainder
        const double a = last_step ? 1.0 : std::clamp(actions[j], 0.0, 1.0);
        const double before = state_.holdings[j];
        const double requested = a * before;
        const double after = before - requested;
        // `before - after` is exact (Fast2Sum), so executed amounts telescope
        const double executed = before - after;
        state_.holdings[j] = after;
        result.applied_actions[j] = a;
        result.executed[j] = executed;
        aggregate += executed;
    }

    const double prev_price = state_.price;
    // temporary impact discounts this period's fill only
    const double sgn = aggregate > 0.0 ? 1.0 : 0.0;
    const double exec_price =
        prev_price - params_.epsilon * sgn - (params_.eta / params_.tau) * aggregate;
    if (exec_price <= 0.0 && aggregate > 0.0) negative_price_flagged_ = true;

    for (std::size_t j = 0; j < num_agents; ++j) {
        result.per_agent_proceeds[j] = result.executed[j] * exec_price;
        state_.captures[j] += result.per_agent_proceeds[j];
    }

    const double xi = noise_enabled_ ? gaussian(state_.rng) : 0.0;
    const double new_price = prev_price + params_.sigma * std::sqrt(params_.tau) * xi -
                             params_.tau * params_.gamma_perm * (aggregate / params_.tau);
    // prices are not clamped, but a non-positive quote has no log-return
    if (new_price > 0.0 && prev_price > 0.0) {
        state_.log_return_history.push_back(std::log(new_price / prev_price));
    } else {
        state_.log_return_history.push_back(0.0);
        negative_price_flagged_ = true;
    }
    state_.price = new_price;
    state_.step_index += 1;

    result.execution_price = exec_price;
    result.new_price = new_price;
    result.terminal = terminal();

    std::vector<Observation> observations;
    observations.reserve(num_agents);
    for (std::size_t j = 0; j < num_agents; ++j)
        observations.push_back(observe(static_cast<int>(j) + 1));
    return {std::move(observations), std::move(result)};
}

Observation MarketEnv::observe(int agent_id) const {
    const int j = agent_index(agent_id);
    Observation obs;
    const int window = lag_depth_ + 1;
    obs.log_returns.assign(static_cast<std::size_t>(window), 0.0);  // pre-episode history is flat
    const int have = static_cast<int>(state_.log_return_history.size());
    const int take = std::min(have, window);
    for (int i = 0; i < take; ++i)
        obs.log_returns[static_cast<std::size_t>(window - take + i)] =
            state_.log_return_history[static_cast<std::size_t>(have - take + i)];
    obs.trades_remaining_frac =
        static_cast<double>(params_.num_trades - state_.step_index) / params_.num_trades;
    const double initial = agents_[static_cast<std::size_t>(j)].initial_shares;
    obs.own_holdings_frac =
        initial > 0.0 ? state_.holdings[static_cast<std::size_t>(j)] / initial : 0.0;
    return obs;
}

double MarketEnv::realized_shortfall(int agent_id) const {
    const int j = agent_index(agent_id);
    if (!terminal()) throw IncompleteEpisode("realized_shortfall before episode end");
    return agents_[static_cast<std::size_t>(j)].initial_shares * params_.initial_price -
           state_.captures[static_cast<std::size_t>(j)];
}

}  // namespace liquidsim
