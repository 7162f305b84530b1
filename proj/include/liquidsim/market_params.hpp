#pragma once

#include <string>

namespace liquidsim {

// Market model constants shared by the analytic formulas and the simulator.
//
// Units: prices in currency/share, sigma in currency * day^-1/2, eta in
// currency * day / share, gamma_perm in currency / share, tau in days.
struct MarketParams {
    double total_shares = 0.0;   // X
    double initial_price = 0.0;  // P0
    double sigma = 0.0;          // per-period absolute price volatility
    double epsilon = 0.0;        // fixed cost of selling
    double eta = 0.0;            // temporary impact slope
    double gamma_perm = 0.0;     // permanent impact slope
    double horizon_days = 0.0;   // T
    int num_trades = 0;          // N
    double tau = 0.0;            // T / N
    double eta_tilde = 0.0;      // eta * (1 - gamma_perm * tau / (2 * eta))

    // Same market constants over a shorter remaining horizon of `steps`
    // trades (period length tau unchanged).
    MarketParams remaining(int steps) const;

    // Throws InvalidParameter / ConvexityViolation when invariants fail.
    void validate() const;
};

// Observable market assumptions from which the model constants derive.
struct MarketAssumptions {
    double annual_volatility = 0.12;
    double bid_ask_spread = 0.125;
    double daily_volume = 5e6;
    double trading_days_per_year = 250.0;
    double initial_price = 50.0;
    double total_shares = 1e6;
    double horizon_days = 60.0;
    int num_trades = 60;
};

// Model constants from desk-level assumptions:
//   sigma      = price * annual_vol / sqrt(trading_days_per_year)
//   epsilon    = half the bid-ask spread
//   eta        = spread-sized temporary impact at 1% of daily volume
//   gamma_perm = spread-sized permanent depression at 10% of daily volume
MarketParams derive_params(const MarketAssumptions& a);

MarketParams derive_params(double annual_vol, double bid_ask, double daily_volume,
                           double trading_days_per_year, double price, double shares,
                           double horizon_days, int num_trades);

}  // namespace liquidsim
