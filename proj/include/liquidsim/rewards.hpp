#pragma once

#include <string>
#include <vector>

#include "liquidsim/market_params.hpp"

namespace liquidsim {

enum class RewardScheme { Independent, Cooperative, Competitive };

const char* to_string(RewardScheme scheme);
RewardScheme reward_scheme_from_string(const std::string& name);

struct RewardSet {
    std::vector<double> raw;     // per-agent utility-difference rewards
    std::vector<double> shaped;  // after scheme application
};

struct UtilityReward {
    double value = 0.0;
    // false when |U_t| fell below the division floor and the raw
    // difference was returned instead
    bool normalization_applied = false;
};

// One-step utility-difference reward: U_t of the optimal plan for
// holdings_before over steps_remaining_before periods, minus U_{t+1} for
// holdings_after over one period fewer; optionally divided by U_t.
UtilityReward utility_reward(double holdings_before, double holdings_after,
                             int steps_remaining_before, double lambda,
                             const MarketParams& params, bool normalized);

// Independent: identity. Cooperative: both agents get the mean.
// Competitive: the higher-rewarded agent keeps its reward, the other
// receives its own minus the higher (ties keep agent 2's reward).
RewardSet shape_rewards(RewardScheme scheme, const std::vector<double>& raw);

}  // namespace liquidsim
