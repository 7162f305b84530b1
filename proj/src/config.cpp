#include "liquidsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "liquidsim/errors.hpp"

namespace liquidsim {

double ExperimentConfig::total_agent_shares() const {
    double total = 0.0;
    for (const auto& a : agents) total += a.initial_shares;
    return total;
}

MarketParams ExperimentConfig::derive() const {
    MarketAssumptions a = market;
    a.total_shares = total_agent_shares();
    return derive_params(a);
}

void ExperimentConfig::validate() const {
    derive();  // market invariants
    if (agents.empty()) throw ConfigError("agents: at least one agent required");
    for (std::size_t j = 0; j < agents.size(); ++j) {
        const auto& a = agents[j];
        const std::string prefix = "agent." + std::to_string(j + 1);
        if (a.agent_id != static_cast<int>(j) + 1)
            throw ConfigError(prefix + ": ids must be contiguous starting at 1");
        if (!(a.initial_shares > 0.0)) throw ConfigError(prefix + ".shares: must be > 0");
        if (a.risk_aversion < 0.0) throw ConfigError(prefix + ".lambda: must be >= 0");
    }
    if ((scheme == RewardScheme::Cooperative || scheme == RewardScheme::Competitive) &&
        agents.size() != 2)
        throw ConfigError("scheme: cooperative/competitive require exactly 2 agents");
    if (lag_depth < 1) throw ConfigError("lag_depth: must be >= 1");
    if (episodes < 0) throw ConfigError("episodes: must be >= 0");
    if (eval_episodes < 1) throw ConfigError("eval_episodes: must be >= 1");
    if (!(ddpg.actor_lr > 0.0)) throw ConfigError("actor_lr: must be > 0");
    if (!(ddpg.critic_lr > 0.0)) throw ConfigError("critic_lr: must be > 0");
    if (ddpg.discount_factor < 0.0 || ddpg.discount_factor > 1.0)
        throw ConfigError("discount_factor: must be in [0, 1]");
    if (ddpg.soft_update_rate < 0.0 || ddpg.soft_update_rate > 1.0)
        throw ConfigError("soft_update_rate: must be in [0, 1]");
    if (ddpg.minibatch_size < 1) throw ConfigError("minibatch_size: must be >= 1");
    if (ddpg.buffer_capacity < ddpg.minibatch_size)
        throw ConfigError("buffer_capacity: must be >= minibatch_size");
    if (!(ddpg.noise.theta >= 0.0)) throw ConfigError("noise_theta: must be >= 0");
    if (!(ddpg.noise.sigma >= 0.0)) throw ConfigError("noise_sigma: must be >= 0");
    if (ddpg.noise.decay <= 0.0 || ddpg.noise.decay > 1.0)
        throw ConfigError("noise_decay: must be in (0, 1]");
    if (ddpg.noise.floor < 0.0 || ddpg.noise.floor > 1.0)
        throw ConfigError("noise_floor: must be in [0, 1]");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t consumed = 0;
        const double v = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t consumed = 0;
        const long long v = std::stoll(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(key + ": expected true/false");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::map<int, double> agent_shares;
    std::map<int, double> agent_lambdas;
    bool agents_given = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");

        if (key == "annual_volatility") config.market.annual_volatility = parse_double(key, value);
        else if (key == "bid_ask_spread") config.market.bid_ask_spread = parse_double(key, value);
        else if (key == "daily_volume") config.market.daily_volume = parse_double(key, value);
        else if (key == "trading_days_per_year")
            config.market.trading_days_per_year = parse_double(key, value);
        else if (key == "initial_price") config.market.initial_price = parse_double(key, value);
        else if (key == "horizon_days") config.market.horizon_days = parse_double(key, value);
        else if (key == "num_trades")
            config.market.num_trades = static_cast<int>(parse_int(key, value));
        else if (key == "scheme") config.scheme = reward_scheme_from_string(value);
        else if (key == "normalized_rewards") config.normalized_rewards = parse_bool(key, value);
        else if (key == "lag_depth") config.lag_depth = static_cast<int>(parse_int(key, value));
        else if (key == "episodes") config.episodes = static_cast<int>(parse_int(key, value));
        else if (key == "eval_episodes")
            config.eval_episodes = static_cast<int>(parse_int(key, value));
        else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "out_dir") config.out_dir = value;
        else if (key == "actor_lr") config.ddpg.actor_lr = parse_double(key, value);
        else if (key == "critic_lr") config.ddpg.critic_lr = parse_double(key, value);
        else if (key == "discount_factor") config.ddpg.discount_factor = parse_double(key, value);
        else if (key == "soft_update_rate")
            config.ddpg.soft_update_rate = parse_double(key, value);
        else if (key == "buffer_capacity")
            config.ddpg.buffer_capacity = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "minibatch_size")
            config.ddpg.minibatch_size = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "noise_theta") config.ddpg.noise.theta = parse_double(key, value);
        else if (key == "noise_sigma") config.ddpg.noise.sigma = parse_double(key, value);
        else if (key == "noise_decay") config.ddpg.noise.decay = parse_double(key, value);
        else if (key == "noise_floor") config.ddpg.noise.floor = parse_double(key, value);
        else if (key == "agents") {
            agents_given = true;
            const long long n = parse_int(key, value);
            if (n < 1) throw ConfigError("agents: must be >= 1");
        } else if (key.rfind("agent.", 0) == 0) {
            const auto rest = key.substr(6);
            const auto dot = rest.find('.');
            if (dot == std::string::npos)
                throw ConfigError(key + ": expected agent.<index>.<field>");
            int idx = 0;
            try {
                idx = std::stoi(rest.substr(0, dot));
            } catch (const std::exception&) {
                throw ConfigError(key + ": bad agent index");
            }
            if (idx < 1) throw ConfigError(key + ": agent index must be >= 1");
            const std::string field = rest.substr(dot + 1);
            if (field == "shares") agent_shares[idx] = parse_double(key, value);
            else if (field == "lambda") agent_lambdas[idx] = parse_double(key, value);
            else throw ConfigError(key + ": unknown agent field '" + field + "'");
            agents_given = true;
        } else {
            throw ConfigError("unknown key: " + key);
        }
    }

    if (agents_given) {
        const std::size_t count = std::max(
            agent_shares.empty() ? 0 : static_cast<std::size_t>(agent_shares.rbegin()->first),
            agent_lambdas.empty() ? 0 : static_cast<std::size_t>(agent_lambdas.rbegin()->first));
        if (count == 0) throw ConfigError("agents: declared but no agent.<j> entries");
        config.agents.clear();
        for (std::size_t j = 1; j <= count; ++j) {
            const std::string prefix = "agent." + std::to_string(j);
            const auto s = agent_shares.find(static_cast<int>(j));
            const auto l = agent_lambdas.find(static_cast<int>(j));
            if (s == agent_shares.end()) throw ConfigError(prefix + ".shares: missing");
            if (l == agent_lambdas.end()) throw ConfigError(prefix + ".lambda: missing");
            config.agents.push_back({static_cast<int>(j), s->second, l->second});
        }
    }

    config.validate();
    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "annual_volatility = " << format_double(config.market.annual_volatility) << "\n";
    out << "bid_ask_spread = " << format_double(config.market.bid_ask_spread) << "\n";
    out << "daily_volume = " << format_double(config.market.daily_volume) << "\n";
    out << "trading_days_per_year = " << format_double(config.market.trading_days_per_year)
        << "\n";
    out << "initial_price = " << format_double(config.market.initial_price) << "\n";
    out << "horizon_days = " << format_double(config.market.horizon_days) << "\n";
    out << "num_trades = " << config.market.num_trades << "\n";
    out << "agents = " << config.agents.size() << "\n";
    for (const auto& a : config.agents) {
        out << "agent." << a.agent_id << ".shares = " << format_double(a.initial_shares) << "\n";
        out << "agent." << a.agent_id << ".lambda = " << format_double(a.risk_aversion) << "\n";
    }
    out << "scheme = " << to_string(config.scheme) << "\n";
    out << "normalized_rewards = " << (config.normalized_rewards ? "true" : "false") << "\n";
    out << "lag_depth = " << config.lag_depth << "\n";
    out << "episodes = " << config.episodes << "\n";
    out << "eval_episodes = " << config.eval_episodes << "\n";
    out << "seed = " << config.seed << "\n";
    out << "out_dir = " << config.out_dir << "\n";
    out << "actor_lr = " << format_double(config.ddpg.actor_lr) << "\n";
    out << "critic_lr = " << format_double(config.ddpg.critic_lr) << "\n";
    out << "discount_factor = " << format_double(config.ddpg.discount_factor) << "\n";
    out << "soft_update_rate = " << format_double(config.ddpg.soft_update_rate) << "\n";
    out << "buffer_capacity = " << config.ddpg.buffer_capacity << "\n";
    out << "minibatch_size = " << config.ddpg.minibatch_size << "\n";
    out << "noise_theta = " << format_double(config.ddpg.noise.theta) << "\n";
    out << "noise_sigma = " << format_double(config.ddpg.noise.sigma) << "\n";
    out << "noise_decay = " << format_double(config.ddpg.noise.decay) << "\n";
    out << "noise_floor = " << format_double(config.ddpg.noise.floor) << "\n";
    return out.str();
}

}  // namespace liquidsim
