#include "liquidsim/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <future>
#include <memory>

#include "liquidsim/analytic.hpp"
#include "liquidsim/errors.hpp"
#include "liquidsim/training.hpp"

namespace liquidsim {

namespace {

namespace fs = std::filesystem;

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

EnvFactory make_env_factory(const MarketParams& params, std::vector<AgentSpec> agents,
                            int lag_depth) {
    return [params, agents = std::move(agents), lag_depth](std::uint64_t seed) {
        return MarketEnv::create(params, agents, lag_depth, seed);
    };
}

// A trained policy bundle for one experiment leg.
struct TrainedRun {
    std::vector<std::unique_ptr<DdpgAgent>> learners;
    std::vector<AgentSlot> slots;
    TrainingLog log;
    EvaluationResult eval;
};

// Trains the given agent roster (scripted slots have empty lambda order) and
// evaluates it with exploration off. Deterministic in (config, seed, tag).
TrainedRun train_and_evaluate(const ExperimentConfig& config, const MarketParams& params,
                              const std::vector<AgentSpec>& agents,
                              const std::vector<bool>& scripted_linear, RewardScheme scheme,
                              std::uint64_t run_seed) {
    TrainedRun run;
    const int obs_dim = Observation::dimension(config.lag_depth);
    for (std::size_t j = 0; j < agents.size(); ++j) {
        if (scripted_linear[j]) {
            run.slots.push_back(scripted_linear_seller());
        } else {
            run.learners.push_back(std::make_unique<DdpgAgent>(
                obs_dim, config.ddpg, child_seed(run_seed, 0xA6E0 + j)));
            AgentSlot slot;
            slot.learner = run.learners.back().get();
            run.slots.push_back(std::move(slot));
        }
    }
    const EnvFactory factory = make_env_factory(params, agents, config.lag_depth);
    run.log = run_training(factory, run.slots, scheme, config.episodes,
                           child_seed(run_seed, 0x7141), config.normalized_rewards);
    run.eval = evaluate_policy(factory, run.slots, config.eval_episodes,
                               child_seed(run_seed, 0xE7A1));
    return run;
}

const std::vector<double> kAnalyticLambdas = {1e-4, 1e-6, 1e-9};

RunResult cmd_analytic(const ExperimentConfig& config) {
    const MarketParams params = config.derive();
    RunResult result;

    std::vector<std::string> schema = {"step"};
    std::vector<Trajectory> trajectories;
    for (double lambda : kAnalyticLambdas) {
        char name[48];
        std::snprintf(name, sizeof(name), "holdings_lambda_%g", lambda);
        schema.push_back(name);
        trajectories.push_back(optimal_trajectory(params.total_shares, lambda, params));
    }
    std::vector<CsvRow> rows;
    for (int k = 0; k <= params.num_trades; ++k) {
        CsvRow row{static_cast<std::int64_t>(k)};
        for (const auto& t : trajectories) row.push_back(t.holdings[static_cast<std::size_t>(k)]);
        rows.push_back(std::move(row));
    }
    result.artifacts.push_back(
        emit_csv(rows, schema, join_path(config.out_dir, "analytic_trajectories.csv")));

    std::vector<CsvRow> summary;
    for (double lambda : kAnalyticLambdas) {
        const auto traj = optimal_trajectory(params.total_shares, lambda, params);
        const auto value = evaluate_trajectory(traj, lambda, params);
        summary.push_back(CsvRow{lambda, kappa_tilde(lambda, params), value.expected_shortfall,
                                 value.variance, value.utility});
    }
    result.artifacts.push_back(emit_csv(
        summary, {"lambda", "kappa_tilde", "expected_shortfall", "variance", "utility"},
        join_path(config.out_dir, "analytic_shortfalls.csv")));
    return result;
}

RunResult cmd_verify_theorems(const ExperimentConfig& config) {
    const MarketParams params = config.derive();
    const double total = params.total_shares;

    std::vector<std::vector<double>> splits;
    splits.push_back({total});  // J = 1: equality
    for (int i = 1; i <= 9; ++i) {
        const double a = 0.1 * i;
        splits.push_back({a * total, total - a * total});
    }
    splits.push_back({0.2 * total, 0.3 * total, total - 0.2 * total - 0.3 * total});

    const std::vector<std::pair<double, double>> lambda_pairs = {
        {1e-6, 1e-6}, {1e-4, 1e-9}, {1e-4, 1e-6}};

    const TheoremReport report = verify_theorems(params, splits, lambda_pairs);

    std::vector<CsvRow> rows;
    for (const auto& c : report.theorem1) {
        std::string partition;
        for (std::size_t i = 0; i < c.partition.size(); ++i) {
            if (i) partition += '|';
            partition += format_csv_cell(CsvCell{c.partition[i]});
        }
        rows.push_back(CsvRow{std::string("theorem1"), std::string(c.description), partition,
                              c.sum_of_parts, c.whole, c.margin,
                              std::string(c.passed ? "pass" : "fail")});
    }
    for (const auto& c : report.theorem2) {
        char lambdas[64];
        std::snprintf(lambdas, sizeof(lambdas), "%g|%g", c.lambda1, c.lambda2);
        rows.push_back(CsvRow{std::string("theorem2"), std::string(c.description),
                              std::string(lambdas), c.max_abs_deviation, c.max_rel_deviation,
                              c.bias_expected ? 1.0 : 0.0,
                              std::string(c.passed ? "pass" : "fail")});
    }

    RunResult result;
    result.artifacts.push_back(emit_csv(
        rows, {"theorem", "case", "inputs", "value_a", "value_b", "margin_or_flag", "status"},
        join_path(config.out_dir, "theorem_report.csv")));
    result.exit_code = report.all_passed() ? 0 : 1;
    return result;
}

void emit_training_outputs(const ExperimentConfig& config, const MarketParams& params,
                           const std::vector<AgentSpec>& agents, const TrainedRun& run,
                           RunResult& result) {
    const std::size_t num_agents = agents.size();

    std::vector<std::string> curve_schema = {"episode"};
    for (std::size_t j = 1; j <= num_agents; ++j) {
        curve_schema.push_back("shortfall_agent_" + std::to_string(j));
        curve_schema.push_back("reward_sum_agent_" + std::to_string(j));
        curve_schema.push_back("critic_loss_agent_" + std::to_string(j));
    }
    std::vector<CsvRow> curve_rows;
    for (int e = 0; e < run.log.episodes(); ++e) {
        CsvRow row{static_cast<std::int64_t>(e)};
        for (std::size_t j = 0; j < num_agents; ++j) {
            row.push_back(run.log.shortfalls[static_cast<std::size_t>(e)][j]);
            row.push_back(run.log.shaped_reward_sums[static_cast<std::size_t>(e)][j]);
            row.push_back(run.log.mean_critic_losses[static_cast<std::size_t>(e)][j]);
        }
        curve_rows.push_back(std::move(row));
    }
    result.artifacts.push_back(
        emit_csv(curve_rows, curve_schema, join_path(config.out_dir, "training_curve.csv")));

    std::vector<std::string> traj_schema = {"step"};
    for (std::size_t j = 1; j <= num_agents; ++j)
        traj_schema.push_back("mean_holdings_agent_" + std::to_string(j));
    std::vector<CsvRow> traj_rows;
    for (int k = 0; k <= params.num_trades; ++k) {
        CsvRow row{static_cast<std::int64_t>(k)};
        for (std::size_t j = 0; j < num_agents; ++j)
            row.push_back(run.eval.mean_trajectory[j][static_cast<std::size_t>(k)]);
        traj_rows.push_back(std::move(row));
    }
    result.artifacts.push_back(
        emit_csv(traj_rows, traj_schema, join_path(config.out_dir, "mean_trajectory.csv")));

    std::vector<CsvRow> summary_rows;
    for (std::size_t j = 0; j < num_agents; ++j) {
        summary_rows.push_back(
            CsvRow{static_cast<std::int64_t>(j + 1), agents[j].initial_shares,
                   agents[j].risk_aversion,
                   optimal_expected_shortfall(agents[j].initial_shares, agents[j].risk_aversion,
                                              params),
                   run.log.trailing_mean_shortfall(static_cast<int>(j), 100),
                   run.eval.mean_shortfall[j], run.eval.stdev_shortfall[j]});
    }
    result.artifacts.push_back(emit_csv(
        summary_rows,
        {"agent", "shares", "lambda", "analytic_optimal_E", "trailing100_train_shortfall",
         "eval_mean_shortfall", "eval_stdev_shortfall"},
        join_path(config.out_dir, "summary.csv")));
}

RunResult cmd_train(const ExperimentConfig& config) {
    const MarketParams params = config.derive();
    RunResult result;
    const std::vector<bool> scripted(config.agents.size(), false);
    const TrainedRun run = train_and_evaluate(config, params, config.agents, scripted,
                                              config.scheme, child_seed(config.seed, 0x1));
    emit_training_outputs(config, params, config.agents, run, result);
    return result;
}

RunResult cmd_evaluate(const ExperimentConfig& config) {
    const MarketParams params = config.derive();
    RunResult result;
    const std::vector<bool> scripted(config.agents.size(), false);
    const TrainedRun run = train_and_evaluate(config, params, config.agents, scripted,
                                              config.scheme, child_seed(config.seed, 0x1));

    std::vector<CsvRow> rows;
    for (std::size_t j = 0; j < config.agents.size(); ++j) {
        rows.push_back(CsvRow{static_cast<std::int64_t>(j + 1), run.eval.mean_shortfall[j],
                              run.eval.stdev_shortfall[j],
                              optimal_expected_shortfall(config.agents[j].initial_shares,
                                                         config.agents[j].risk_aversion, params)});
    }
    result.artifacts.push_back(emit_csv(
        rows, {"agent", "eval_mean_shortfall", "eval_stdev_shortfall", "analytic_optimal_E"},
        join_path(config.out_dir, "eval_summary.csv")));

    std::vector<std::string> traj_schema = {"step"};
    for (std::size_t j = 1; j <= config.agents.size(); ++j)
        traj_schema.push_back("mean_holdings_agent_" + std::to_string(j));
    std::vector<CsvRow> traj_rows;
    for (int k = 0; k <= params.num_trades; ++k) {
        CsvRow row{static_cast<std::int64_t>(k)};
        for (std::size_t j = 0; j < config.agents.size(); ++j)
            row.push_back(run.eval.mean_trajectory[j][static_cast<std::size_t>(k)]);
        traj_rows.push_back(std::move(row));
    }
    result.artifacts.push_back(
        emit_csv(traj_rows, traj_schema, join_path(config.out_dir, "mean_trajectory.csv")));
    return result;
}

// Shortfall comparison: one agent selling everything vs a 0.3/0.7 pair.
RunResult cmd_fig2(const ExperimentConfig& config) {
    const MarketParams params = config.derive();
    const double total = params.total_shares;
    const double lambda = 1e-6;

    const std::vector<AgentSpec> solo = {{1, total, lambda}};
    const std::vector<AgentSpec> pair = {{1, 0.3 * total, lambda}, {2, 0.7 * total, lambda}};

    auto fut_a = std::async(std::launch::async, [&] {
        return train_and_evaluate(config, params, solo, {false}, RewardScheme::Independent,
                                  child_seed(config.seed, 0xF120A));
    });
    const TrainedRun run_b =
        train_and_evaluate(config, params, pair, {false, false}, RewardScheme::Independent,
                           child_seed(config.seed, 0xF120B));
    const TrainedRun run_a = fut_a.get();

    const double analytic_a = optimal_expected_shortfall(total, lambda, params);
    const double analytic_b1 = optimal_expected_shortfall(0.3 * total, lambda, params);
    const double analytic_b2 = optimal_expected_shortfall(0.7 * total, lambda, params);

    std::vector<CsvRow> rows;
    rows.push_back(CsvRow{std::string("A"), total, analytic_a,
                          run_a.log.trailing_mean_shortfall(0, 100),
                          run_a.eval.mean_shortfall[0]});
    rows.push_back(CsvRow{std::string("B1"), 0.3 * total, analytic_b1,
                          run_b.log.trailing_mean_shortfall(0, 100),
                          run_b.eval.mean_shortfall[0]});
    rows.push_back(CsvRow{std::string("B2"), 0.7 * total, analytic_b2,
                          run_b.log.trailing_mean_shortfall(1, 100),
                          run_b.eval.mean_shortfall[1]});
    rows.push_back(CsvRow{std::string("B1+B2"), total, analytic_b1 + analytic_b2,
                          run_b.log.trailing_mean_shortfall_sum(100),
                          run_b.eval.mean_shortfall[0] + run_b.eval.mean_shortfall[1]});

    RunResult result;
    result.artifacts.push_back(emit_csv(
        rows,
        {"agent", "shares", "analytic_optimal_E", "trailing100_train_shortfall",
         "eval_mean_shortfall"},
        join_path(config.out_dir, "fig2_shortfalls.csv")));
    return result;
}

// Trajectory bias: two lambdas alone vs the same pair sharing the market.
RunResult cmd_fig3(const ExperimentConfig& config) {
    const MarketParams params = config.derive();
    const double half = 0.5 * params.total_shares;
    const double l1 = 1e-4;
    const double l2 = 1e-9;

    auto fut_a1 = std::async(std::launch::async, [&] {
        return train_and_evaluate(config, params, {{1, half, l1}}, {false},
                                  RewardScheme::Independent, child_seed(config.seed, 0xF1301));
    });
    auto fut_a2 = std::async(std::launch::async, [&] {
        return train_and_evaluate(config, params, {{1, half, l2}}, {false},
                                  RewardScheme::Independent, child_seed(config.seed, 0xF1302));
    });
    const TrainedRun run_joint = train_and_evaluate(
        config, params, {{1, half, l1}, {2, half, l2}}, {false, false},
        RewardScheme::Independent, child_seed(config.seed, 0xF1303));
    const TrainedRun run_a1 = fut_a1.get();
    const TrainedRun run_a2 = fut_a2.get();

    const Trajectory opt1 = optimal_trajectory(half, l1, params);
    const Trajectory opt2 = optimal_trajectory(half, l2, params);

    std::vector<CsvRow> rows;
    for (int k = 0; k <= params.num_trades; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        rows.push_back(CsvRow{static_cast<std::int64_t>(k), run_a1.eval.mean_trajectory[0][ks],
                              run_a2.eval.mean_trajectory[0][ks],
                              run_joint.eval.mean_trajectory[0][ks],
                              run_joint.eval.mean_trajectory[1][ks], opt1.holdings[ks],
                              opt2.holdings[ks]});
    }
    RunResult result;
    result.artifacts.push_back(emit_csv(
        rows,
        {"step", "a1_single", "a2_single", "b1_joint", "b2_joint", "a1_analytic_optimal",
         "a2_analytic_optimal"},
        join_path(config.out_dir, "fig3_trajectories.csv")));
    return result;
}

// Cooperative / competitive shaping vs independent training.
RunResult cmd_fig4(const ExperimentConfig& config) {
    const MarketParams params = config.derive();
    const double half = 0.5 * params.total_shares;
    const double lambda = 1e-6;
    const std::vector<AgentSpec> pair = {{1, half, lambda}, {2, half, lambda}};

    auto fut_ind = std::async(std::launch::async, [&] {
        return train_and_evaluate(config, params, pair, {false, false},
                                  RewardScheme::Independent, child_seed(config.seed, 0xF1401));
    });
    auto fut_coop = std::async(std::launch::async, [&] {
        return train_and_evaluate(config, params, pair, {false, false},
                                  RewardScheme::Cooperative, child_seed(config.seed, 0xF1402));
    });
    const TrainedRun run_comp =
        train_and_evaluate(config, params, pair, {false, false}, RewardScheme::Competitive,
                           child_seed(config.seed, 0xF1403));
    const TrainedRun run_ind = fut_ind.get();
    const TrainedRun run_coop = fut_coop.get();

    std::vector<CsvRow> curve_rows;
    for (int e = 0; e < run_ind.log.episodes(); ++e) {
        const auto es = static_cast<std::size_t>(e);
        auto sum = [&](const TrainedRun& r) {
            return r.log.shortfalls[es][0] + r.log.shortfalls[es][1];
        };
        curve_rows.push_back(CsvRow{static_cast<std::int64_t>(e), sum(run_ind), sum(run_coop),
                                    sum(run_comp)});
    }
    RunResult result;
    result.artifacts.push_back(emit_csv(
        curve_rows, {"episode", "independent_sum", "cooperative_sum", "competitive_sum"},
        join_path(config.out_dir, "fig4_curves.csv")));

    std::vector<CsvRow> summary;
    auto add = [&](const char* name, const TrainedRun& r) {
        summary.push_back(CsvRow{std::string(name), r.log.trailing_mean_shortfall_sum(100),
                                 r.log.trailing_mean_shortfall(0, 100),
                                 r.log.trailing_mean_shortfall(1, 100),
                                 r.eval.mean_shortfall[0] + r.eval.mean_shortfall[1]});
    };
    add("independent", run_ind);
    add("cooperative", run_coop);
    add("competitive", run_comp);
    result.artifacts.push_back(emit_csv(
        summary,
        {"scheme", "trailing100_sum", "trailing100_agent_1", "trailing100_agent_2",
         "eval_mean_sum"},
        join_path(config.out_dir, "fig4_summary.csv")));
    return result;
}

// Host learner against a frozen linear seller, vs the host trained alone.
RunResult cmd_fig5(const ExperimentConfig& config) {
    const MarketParams params = config.derive();
    const double half = 0.5 * params.total_shares;
    const double host_lambda = 1e-6;
    const double competitor_lambda = 1e-9;

    auto fut_single = std::async(std::launch::async, [&] {
        return train_and_evaluate(config, params, {{1, half, host_lambda}}, {false},
                                  RewardScheme::Independent, child_seed(config.seed, 0xF1501));
    });
    const TrainedRun run_vs = train_and_evaluate(
        config, params, {{1, half, host_lambda}, {2, half, competitor_lambda}}, {false, true},
        RewardScheme::Independent, child_seed(config.seed, 0xF1502));
    const TrainedRun run_single = fut_single.get();

    const Trajectory host_opt = optimal_trajectory(half, host_lambda, params);

    std::vector<CsvRow> rows;
    for (int k = 0; k <= params.num_trades; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        rows.push_back(CsvRow{static_cast<std::int64_t>(k), run_vs.eval.mean_trajectory[0][ks],
                              run_vs.eval.mean_trajectory[1][ks],
                              run_single.eval.mean_trajectory[0][ks], host_opt.holdings[ks]});
    }
    RunResult result;
    result.artifacts.push_back(emit_csv(
        rows,
        {"step", "host_vs_competitor", "competitor_linear", "host_single",
         "host_analytic_optimal"},
        join_path(config.out_dir, "fig5_trajectories.csv")));
    return result;
}

}  // namespace

std::vector<std::string> known_commands() {
    return {"analytic", "verify-theorems", "train", "evaluate", "fig2", "fig3", "fig4", "fig5"};
}

RunResult run_command(const std::string& command, const ExperimentConfig& config) {
    config.validate();
    fs::create_directories(config.out_dir);
    if (command == "analytic") return cmd_analytic(config);
    if (command == "verify-theorems") return cmd_verify_theorems(config);
    if (command == "train") return cmd_train(config);
    if (command == "evaluate") return cmd_evaluate(config);
    if (command == "fig2") return cmd_fig2(config);
    if (command == "fig3") return cmd_fig3(config);
    if (command == "fig4") return cmd_fig4(config);
    if (command == "fig5") return cmd_fig5(config);
    throw ConfigError("unknown command: " + command);
}

}  // namespace liquidsim
