#include "liquidsim/rewards.hpp"

#include <cmath>
#include <string>

#include "liquidsim/analytic.hpp"
#include "liquidsim/errors.hpp"

namespace liquidsim {

const char* to_string(RewardScheme scheme) {
    switch (scheme) {
        case RewardScheme::Independent: return "independent";
        case RewardScheme::Cooperative: return "cooperative";
        case RewardScheme::Competitive: return "competitive";
    }
    return "independent";
}

RewardScheme reward_scheme_from_string(const std::string& name) {
    if (name == "independent") return RewardScheme::Independent;
    if (name == "cooperative") return RewardScheme::Cooperative;
    if (name == "competitive") return RewardScheme::Competitive;
    throw UnsupportedConfiguration("unknown reward scheme: " + name);
}

UtilityReward utility_reward(double holdings_before, double holdings_after,
                             int steps_remaining_before, double lambda,
                             const MarketParams& params, bool normalized) {
    if (holdings_after > holdings_before)
        throw InvalidParameter("holdings_after must be <= holdings_before");
    if (steps_remaining_before < 1)
        throw InvalidParameter("steps_remaining_before must be >= 1");

    const double u_now =
        optimal_remaining_utility(holdings_before, lambda, steps_remaining_before, params)
            .utility;
    const double u_next =
        holdings_after == 0.0
            ? 0.0
            : optimal_remaining_utility(holdings_after, lambda, steps_remaining_before - 1,
                                        params)
                  .utility;

    UtilityReward r;
    r.value = u_now - u_next;
    if (normalized) {
        // U_t -> 0 near episode end; dividing there would blow up
        const double floor = 1e-9 * params.epsilon * params.total_shares;
        if (std::abs(u_now) >= floor && floor > 0.0) {
            r.value /= u_now;
            r.normalization_applied = true;
        }
    }
    return r;
}

RewardSet shape_rewards(RewardScheme scheme, const std::vector<double>& raw) {
    for (double r : raw)
        if (!std::isfinite(r)) throw InvalidParameter("non-finite raw reward");
    RewardSet set;
    set.raw = raw;
    switch (scheme) {
        case RewardScheme::Independent:
            set.shaped = raw;
            break;
        case RewardScheme::Cooperative: {
            if (raw.size() != 2)
                throw UnsupportedConfiguration("cooperative scheme is defined for 2 agents");
            const double mean = 0.5 * (raw[0] + raw[1]);
            set.shaped = {mean, mean};
            break;
        }
        case RewardScheme::Competitive: {
            if (raw.size() != 2)
                throw UnsupportedConfiguration("competitive scheme is defined for 2 agents");
            if (raw[0] > raw[1])
                set.shaped = {raw[0], raw[1] - raw[0]};
            else
                set.shaped = {raw[0] - raw[1], raw[1]};
            break;
        }
    }
    return set;
}

}  // namespace liquidsim
