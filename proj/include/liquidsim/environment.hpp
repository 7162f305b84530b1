#pragma once

#include <cstdint>
#include <vector>

#include "liquidsim/market_params.hpp"
#include "liquidsim/rng.hpp"

namespace liquidsim {

struct AgentSpec {
    int agent_id = 0;            // 1-based, contiguous
    double initial_shares = 0.0; // X_j
    double risk_aversion = 0.0;  // lambda_j
};

// Partial view served to one agent: recent log-returns, the fraction of
// trades remaining and the agent's own inventory fraction. Never exposes
// other agents' holdings.
struct Observation {
    std::vector<double> log_returns;  // r_{k-D} .. r_k, D+1 values
    double trades_remaining_frac = 0.0;  // m_k
    double own_holdings_frac = 0.0;      // l_{j,k}

    std::vector<double> to_vector() const;
    static int dimension(int lag_depth) { return lag_depth + 3; }
};

struct StepResult {
    std::vector<double> executed;        // n_{j,k} per agent
    std::vector<double> applied_actions; // fractions actually applied
    double execution_price = 0.0;        // shared fill price this period
    double new_price = 0.0;              // quoted price after noise + permanent impact
    std::vector<double> per_agent_proceeds;
    bool terminal = false;
};

struct MarketState {
    int step_index = 0;                    // k in 0..N
    double price = 0.0;                    // P_k
    std::vector<double> log_return_history;  // r_1..r_k, grows by one per step
    std::vector<double> holdings;            // x_{j,k}
    std::vector<double> captures;            // cumulative proceeds per agent
    Rng rng;                                 // xi_k draws
};

// Arithmetic random-walk price with aggregate linear permanent impact and a
// per-period temporary execution discount; per-agent inventories; forced
// full liquidation of any remainder on the final trade.
class MarketEnv {
  public:
    static MarketEnv create(const MarketParams& params, std::vector<AgentSpec> agents,
                            int lag_depth, std::uint64_t seed, bool noise_enabled = true);

    // Executes one trading period given per-agent sell fractions in [0, 1]
    // (values are clipped; non-finite values are rejected). Returns the
    // per-agent observations of the new state plus the step outcome.
    std::pair<std::vector<Observation>, StepResult> step(const std::vector<double>& actions);

    Observation observe(int agent_id) const;

    // X_j * P0 - captures_j; only defined once the episode is terminal.
    double realized_shortfall(int agent_id) const;

    bool terminal() const { return state_.step_index >= params_.num_trades; }
    int num_agents() const { return static_cast<int>(agents_.size()); }
    int lag_depth() const { return lag_depth_; }
    const MarketParams& params() const { return params_; }
    const std::vector<AgentSpec>& agents() const { return agents_; }
    const MarketState& state() const { return state_; }
    // True if any execution price went non-positive this episode.
    bool negative_price_flagged() const { return negative_price_flagged_; }

  private:
    MarketEnv() = default;
    int agent_index(int agent_id) const;

    MarketParams params_;
    std::vector<AgentSpec> agents_;
    int lag_depth_ = 5;
    bool noise_enabled_ = true;
    bool negative_price_flagged_ = false;
    MarketState state_;
};

}  // namespace liquidsim
