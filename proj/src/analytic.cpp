#include "liquidsim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "liquidsim/errors.hpp"

namespace liquidsim {

Trajectory Trajectory::from_holdings(std::vector<double> holdings) {
    if (holdings.empty()) throw InvalidTrajectory("holdings must be non-empty");
    Trajectory t;
    t.trades.reserve(holdings.size() - 1);
    for (std::size_t k = 1; k < holdings.size(); ++k) {
        const double n = holdings[k - 1] - holdings[k];
        if (n < 0.0) throw InvalidTrajectory("negative trade: holdings must be non-increasing");
        t.trades.push_back(n);
    }
    t.holdings = std::move(holdings);
    return t;
}

double kappa_tilde(double lambda, const MarketParams& params) {
    if (lambda < 0.0) throw InvalidParameter("lambda must be >= 0");
    if (lambda == 0.0) return 0.0;
    return std::sqrt(lambda * params.sigma * params.sigma / params.eta_tilde);
}

Trajectory optimal_trajectory(double shares, double lambda, const MarketParams& params) {
    if (shares < 0.0) throw InvalidParameter("shares must be >= 0");
    params.validate();
    const int n = params.num_trades;
    std::vector<double> holdings(static_cast<std::size_t>(n) + 1);
    const double kappa = kappa_tilde(lambda, params);
    if (kappa == 0.0) {
        // risk-neutral limit of the sinh ratio: linear selling
        for (int k = 0; k <= n; ++k)
            holdings[static_cast<std::size_t>(k)] =
                shares * (1.0 - static_cast<double>(k) / n);
    } else {
        const double horizon = params.horizon_days;
        const double denom = std::sinh(kappa * horizon);
        for (int k = 0; k <= n; ++k)
            holdings[static_cast<std::size_t>(k)] =
                shares * std::sinh(kappa * (horizon - k * params.tau)) / denom;
    }
    holdings.front() = shares;
    holdings.back() = 0.0;
    return Trajectory::from_holdings(std::move(holdings));
}

UtilityValue evaluate_trajectory(const Trajectory& traj, double lambda,
                                 const MarketParams& params) {
    if (lambda < 0.0) throw InvalidParameter("lambda must be >= 0");
    if (traj.holdings.size() != traj.trades.size() + 1)
        throw InvalidTrajectory("holdings/trades length mismatch");
    const double tau = params.tau;
    double shortfall = 0.0;
    double variance = 0.0;
    for (std::size_t k = 0; k < traj.trades.size(); ++k) {
        const double n = traj.trades[k];
        if (n < 0.0) throw InvalidTrajectory("negative trade");
        const double x = traj.holdings[k + 1];  // post-trade holding
        const double rate = n / tau;
        shortfall += tau * x * params.gamma_perm * rate;
        if (n > 0.0) shortfall += n * (params.epsilon + (params.eta / tau) * n);
        variance += params.sigma * params.sigma * tau * x * x;
    }
    UtilityValue u;
    u.expected_shortfall = shortfall;
    u.variance = variance;
    u.lambda_used = lambda;
    u.utility = shortfall + lambda * variance;
    return u;
}

double optimal_expected_shortfall(double shares, double lambda, const MarketParams& params) {
    if (shares == 0.0) return 0.0;
    return evaluate_trajectory(optimal_trajectory(shares, lambda, params), lambda, params)
        .expected_shortfall;
}

UtilityValue optimal_remaining_utility(double shares, double lambda, int steps,
                                       const MarketParams& params) {
    if (shares < 0.0) throw InvalidParameter("shares must be >= 0");
    if (steps == 0) {
        if (shares != 0.0)
            throw InvalidParameter("zero remaining steps with shares still held");
        UtilityValue u;
        u.lambda_used = lambda;
        return u;
    }
    const MarketParams rem = params.remaining(steps);
    return evaluate_trajectory(optimal_trajectory(shares, lambda, rem), lambda, rem);
}

bool TheoremReport::all_passed() const {
    for (const auto& c : theorem1)
        if (!c.passed) return false;
    for (const auto& c : theorem2)
        if (!c.passed) return false;
    return true;
}

TheoremReport verify_theorems(const MarketParams& params,
                              const std::vector<std::vector<double>>& splits,
                              const std::vector<std::pair<double, double>>& lambda_pairs) {
    params.validate();
    TheoremReport report;

    const double theorem1_lambda = 1e-6;
    for (const auto& split : splits) {
        if (split.empty()) throw InvalidScenario("empty partition");
        double total = 0.0;
        for (double x : split) {
            if (x < 0.0) throw InvalidScenario("negative partition entry");
            total += x;
        }
        if (std::abs(total - params.total_shares) >
            1e-9 * std::max(1.0, params.total_shares))
            throw InvalidScenario("partition does not sum to total_shares");

        Theorem1Case c;
        c.partition = split;
        double sum = 0.0;
        for (double x : split) sum += optimal_expected_shortfall(x, theorem1_lambda, params);
        c.sum_of_parts = sum;
        c.whole = optimal_expected_shortfall(params.total_shares, theorem1_lambda, params);
        c.margin = c.whole - c.sum_of_parts;
        c.passed = c.sum_of_parts <= c.whole * (1.0 + 1e-12);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "J=%zu split", split.size());
        c.description = buf;
        report.theorem1.push_back(std::move(c));
    }

    for (const auto& [l1, l2] : lambda_pairs) {
        if (l1 < 0.0 || l2 < 0.0) throw InvalidScenario("lambda must be >= 0");
        Theorem2Case c;
        c.lambda1 = l1;
        c.lambda2 = l2;
        c.bias_expected = (l1 != l2);

        const double joint_lambda = 0.5 * (l1 + l2);  // synthesized risk aversion
        const Trajectory joint =
            optimal_trajectory(params.total_shares, joint_lambda, params);
        const Trajectory half1 = optimal_trajectory(0.5 * params.total_shares, l1, params);
        const Trajectory half2 = optimal_trajectory(0.5 * params.total_shares, l2, params);

        double max_dev = 0.0;
        for (std::size_t k = 0; k < joint.holdings.size(); ++k) {
            const double mixture = half1.holdings[k] + half2.holdings[k];
            max_dev = std::max(max_dev, std::abs(joint.holdings[k] - mixture));
        }
        c.max_abs_deviation = max_dev;
        c.max_rel_deviation =
            params.total_shares > 0.0 ? max_dev / params.total_shares : 0.0;
        c.passed = c.bias_expected ? (c.max_abs_deviation > 0.0)
                                   : (c.max_rel_deviation < 1e-12);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "lambda pair (%g, %g)", l1, l2);
        c.description = buf;
        report.theorem2.push_back(std::move(c));
    }
    return report;
}

}  // namespace liquidsim
