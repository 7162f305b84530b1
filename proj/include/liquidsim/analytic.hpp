#pragma once

#include <string>
#include <vector>

#include "liquidsim/market_params.hpp"

namespace liquidsim {

// Holdings-over-time vector x_0..x_N (x_k = shares remaining after trade k)
// together with the implied trades n_k = x_{k-1} - x_k.
struct Trajectory {
    std::vector<double> holdings;
    std::vector<double> trades;

    // Builds from holdings; throws InvalidTrajectory on a negative trade.
    static Trajectory from_holdings(std::vector<double> holdings);
};

struct UtilityValue {
    double expected_shortfall = 0.0;  // E(x)
    double variance = 0.0;            // V(x)
    double utility = 0.0;             // U(x) = E + lambda * V
    double lambda_used = 0.0;
};

// Urgency rate kappa_tilde = sqrt(lambda * sigma^2 / eta_tilde); 0 at lambda 0.
double kappa_tilde(double lambda, const MarketParams& params);

// Utility-minimizing holdings x_k = X sinh(kappa (T - t_k)) / sinh(kappa T);
// exact linear schedule in the risk-neutral limit.
Trajectory optimal_trajectory(double shares, double lambda, const MarketParams& params);

// E(x) = sum tau x_k g(n_k/tau) + sum n_k h(n_k/tau),  V(x) = sigma^2 sum tau x_k^2,
// with x_k the post-trade holding. Accepts partial liquidations (x_N > 0).
UtilityValue evaluate_trajectory(const Trajectory& traj, double lambda,
                                 const MarketParams& params);

// Expected shortfall of the optimal trajectory, by substitution into E(x).
double optimal_expected_shortfall(double shares, double lambda, const MarketParams& params);

// Utility of optimally liquidating `shares` over `steps` remaining periods.
// steps == 0 is only valid for zero shares (empty plan, zero utility).
UtilityValue optimal_remaining_utility(double shares, double lambda, int steps,
                                       const MarketParams& params);

struct Theorem1Case {
    std::string description;
    std::vector<double> partition;
    double sum_of_parts = 0.0;   // sum_j E(X_j)
    double whole = 0.0;          // E(sum_j X_j)
    double margin = 0.0;         // whole - sum_of_parts
    bool passed = false;
};

struct Theorem2Case {
    std::string description;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double max_abs_deviation = 0.0;  // max_k |joint_k - mixture_k|
    double max_rel_deviation = 0.0;  // relative to total shares
    bool bias_expected = false;      // lambda1 != lambda2
    bool passed = false;
};

struct TheoremReport {
    std::vector<Theorem1Case> theorem1;
    std::vector<Theorem2Case> theorem2;
    bool all_passed() const;
};

// Theorem 1: sum_j E(X_j) <= E(sum_j X_j) for each partition of total_shares.
// Theorem 2: joint optimum at lambda* = (l1+l2)/2 vs the half/half mixture of
// the individually optimal trajectories; equal lambdas must coincide to
// 1e-12 relative, distinct lambdas must deviate.
TheoremReport verify_theorems(const MarketParams& params,
                              const std::vector<std::vector<double>>& splits,
                              const std::vector<std::pair<double, double>>& lambda_pairs);

}  // namespace liquidsim
