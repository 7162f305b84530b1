#include "liquidsim/market_params.hpp"

#include <cmath>

#include "liquidsim/errors.hpp"

namespace liquidsim {

void MarketParams::validate() const {
    if (!(total_shares >= 0.0)) throw InvalidParameter("total_shares must be >= 0");
    if (!(initial_price > 0.0)) throw InvalidParameter("initial_price must be > 0");
    if (!(sigma >= 0.0)) throw InvalidParameter("sigma must be >= 0");
    if (!(epsilon >= 0.0)) throw InvalidParameter("epsilon must be >= 0");
    if (!(eta > 0.0)) throw InvalidParameter("eta must be > 0");
    if (!(gamma_perm >= 0.0)) throw InvalidParameter("gamma_perm must be >= 0");
    if (num_trades < 1) throw InvalidParameter("num_trades must be >= 1");
    if (!(horizon_days > 0.0)) throw InvalidParameter("horizon_days must be > 0");
    if (tau != horizon_days / num_trades)
        throw InvalidParameter("tau must equal horizon_days / num_trades");
    if (!(eta_tilde > 0.0))
        throw ConvexityViolation("eta_tilde <= 0: gamma_perm * tau >= 2 * eta");
}

MarketParams MarketParams::remaining(int steps) const {
    if (steps < 1) throw InvalidParameter("remaining horizon needs >= 1 step");
    MarketParams p = *this;
    p.num_trades = steps;
    p.horizon_days = steps * tau;
    p.tau = p.horizon_days / p.num_trades;
    return p;
}

MarketParams derive_params(const MarketAssumptions& a) {
    if (!(a.annual_volatility > 0.0)) throw InvalidParameter("annual_volatility must be > 0");
    if (!(a.bid_ask_spread > 0.0)) throw InvalidParameter("bid_ask_spread must be > 0");
    if (!(a.daily_volume > 0.0)) throw InvalidParameter("daily_volume must be > 0");
    if (!(a.trading_days_per_year > 0.0))
        throw InvalidParameter("trading_days_per_year must be > 0");
    if (!(a.initial_price > 0.0)) throw InvalidParameter("initial_price must be > 0");
    if (!(a.total_shares > 0.0)) throw InvalidParameter("total_shares must be > 0");
    if (!(a.horizon_days > 0.0)) throw InvalidParameter("horizon_days must be > 0");
    if (a.num_trades < 1) throw InvalidParameter("num_trades must be >= 1");

    MarketParams p;
    p.total_shares = a.total_shares;
    p.initial_price = a.initial_price;
    p.sigma = a.initial_price * a.annual_volatility / std::sqrt(a.trading_days_per_year);
    p.epsilon = a.bid_ask_spread / 2.0;
    p.eta = a.bid_ask_spread / (0.01 * a.daily_volume);
    p.gamma_perm = a.bid_ask_spread / (0.10 * a.daily_volume);
    p.horizon_days = a.horizon_days;
    p.num_trades = a.num_trades;
    p.tau = a.horizon_days / a.num_trades;
    p.eta_tilde = p.eta * (1.0 - p.gamma_perm * p.tau / (2.0 * p.eta));
    p.validate();
    return p;
}

MarketParams derive_params(double annual_vol, double bid_ask, double daily_volume,
                           double trading_days_per_year, double price, double shares,
                           double horizon_days, int num_trades) {
    MarketAssumptions a;
    a.annual_volatility = annual_vol;
    a.bid_ask_spread = bid_ask;
    a.daily_volume = daily_volume;
    a.trading_days_per_year = trading_days_per_year;
    a.initial_price = price;
    a.total_shares = shares;
    a.horizon_days = horizon_days;
    a.num_trades = num_trades;
    return derive_params(a);
}

}  // namespace liquidsim
