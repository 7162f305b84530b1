#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "liquidsim/analytic.hpp"
#include "liquidsim/config.hpp"
#include "liquidsim/ddpg.hpp"
#include "liquidsim/environment.hpp"
#include "liquidsim/errors.hpp"
#include "liquidsim/experiments.hpp"
#include "liquidsim/market_params.hpp"
#include "liquidsim/rewards.hpp"
#include "liquidsim/training.hpp"

namespace py = pybind11;
using namespace liquidsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-agent optimal-liquidation simulator core";

    py::register_exception<InvalidParameter>(m, "InvalidParameterError", PyExc_ValueError);
    py::register_exception<InvalidTrajectory>(m, "InvalidTrajectoryError", PyExc_ValueError);
    py::register_exception<EpisodeFinished>(m, "EpisodeFinishedError", PyExc_RuntimeError);
    py::register_exception<IncompleteEpisode>(m, "IncompleteEpisodeError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigParseError", PyExc_ValueError);

    py::class_<MarketParams>(m, "MarketParams")
        .def_readonly("total_shares", &MarketParams::total_shares)
        .def_readonly("initial_price", &MarketParams::initial_price)
        .def_readonly("sigma", &MarketParams::sigma)
        .def_readonly("epsilon", &MarketParams::epsilon)
        .def_readonly("eta", &MarketParams::eta)
        .def_readonly("gamma_perm", &MarketParams::gamma_perm)
        .def_readonly("horizon_days", &MarketParams::horizon_days)
        .def_readonly("num_trades", &MarketParams::num_trades)
        .def_readonly("tau", &MarketParams::tau)
        .def_readonly("eta_tilde", &MarketParams::eta_tilde)
        .def("remaining", &MarketParams::remaining, py::arg("steps"));

    m.def("derive_params",
          py::overload_cast<double, double, double, double, double, double, double, int>(
              &derive_params),
          py::arg("annual_vol"), py::arg("bid_ask"), py::arg("daily_volume"),
          py::arg("trading_days_per_year"), py::arg("price"), py::arg("shares"),
          py::arg("horizon_days"), py::arg("num_trades"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_static("from_holdings", &Trajectory::from_holdings, py::arg("holdings"))
        .def_readonly("holdings", &Trajectory::holdings)
        .def_readonly("trades", &Trajectory::trades);

    py::class_<UtilityValue>(m, "UtilityValue")
        .def_readonly("expected_shortfall", &UtilityValue::expected_shortfall)
        .def_readonly("variance", &UtilityValue::variance)
        .def_readonly("utility", &UtilityValue::utility)
        .def_readonly("lambda_used", &UtilityValue::lambda_used);

    m.def("kappa_tilde", &kappa_tilde, py::arg("lambda_"), py::arg("params"));
    m.def("optimal_trajectory", &optimal_trajectory, py::arg("shares"), py::arg("lambda_"),
          py::arg("params"));
    m.def("evaluate_trajectory", &evaluate_trajectory, py::arg("trajectory"),
          py::arg("lambda_"), py::arg("params"));
    m.def("optimal_expected_shortfall", &optimal_expected_shortfall, py::arg("shares"),
          py::arg("lambda_"), py::arg("params"));
    m.def("optimal_remaining_utility", &optimal_remaining_utility, py::arg("shares"),
          py::arg("lambda_"), py::arg("steps"), py::arg("params"));

    py::class_<Theorem1Case>(m, "Theorem1Case")
        .def_readonly("description", &Theorem1Case::description)
        .def_readonly("partition", &Theorem1Case::partition)
        .def_readonly("sum_of_parts", &Theorem1Case::sum_of_parts)
        .def_readonly("whole", &Theorem1Case::whole)
        .def_readonly("margin", &Theorem1Case::margin)
        .def_readonly("passed", &Theorem1Case::passed);
    py::class_<Theorem2Case>(m, "Theorem2Case")
        .def_readonly("description", &Theorem2Case::description)
        .def_readonly("lambda1", &Theorem2Case::lambda1)
        .def_readonly("lambda2", &Theorem2Case::lambda2)
        .def_readonly("max_abs_deviation", &Theorem2Case::max_abs_deviation)
        .def_readonly("max_rel_deviation", &Theorem2Case::max_rel_deviation)
        .def_readonly("bias_expected", &Theorem2Case::bias_expected)
        .def_readonly("passed", &Theorem2Case::passed);
    py::class_<TheoremReport>(m, "TheoremReport")
        .def_readonly("theorem1", &TheoremReport::theorem1)
        .def_readonly("theorem2", &TheoremReport::theorem2)
        .def("all_passed", &TheoremReport::all_passed);
    m.def("verify_theorems", &verify_theorems, py::arg("params"), py::arg("splits"),
          py::arg("lambda_pairs"));

    py::class_<AgentSpec>(m, "AgentSpec")
        .def(py::init([](int agent_id, double shares, double risk_aversion) {
                 return AgentSpec{agent_id, shares, risk_aversion};
             }),
             py::arg("agent_id"), py::arg("initial_shares"), py::arg("risk_aversion"))
        .def_readwrite("agent_id", &AgentSpec::agent_id)
        .def_readwrite("initial_shares", &AgentSpec::initial_shares)
        .def_readwrite("risk_aversion", &AgentSpec::risk_aversion);

    py::class_<Observation>(m, "Observation")
        .def_readonly("log_returns", &Observation::log_returns)
        .def_readonly("trades_remaining_frac", &Observation::trades_remaining_frac)
        .def_readonly("own_holdings_frac", &Observation::own_holdings_frac)
        .def("to_vector", &Observation::to_vector);

    py::class_<StepResult>(m, "StepResult")
        .def_readonly("executed", &StepResult::executed)
        .def_readonly("applied_actions", &StepResult::applied_actions)
        .def_readonly("execution_price", &StepResult::execution_price)
        .def_readonly("new_price", &StepResult::new_price)
        .def_readonly("per_agent_proceeds", &StepResult::per_agent_proceeds)
        .def_readonly("terminal", &StepResult::terminal);

    py::class_<MarketEnv>(m, "MarketEnv")
        .def_static("create", &MarketEnv::create, py::arg("params"), py::arg("agents"),
                    py::arg("lag_depth") = 5, py::arg("seed") = 0,
                    py::arg("noise_enabled") = true)
        .def("step", &MarketEnv::step, py::arg("actions"))
        .def("observe", &MarketEnv::observe, py::arg("agent_id"))
        .def("realized_shortfall", &MarketEnv::realized_shortfall, py::arg("agent_id"))
        .def_property_readonly("terminal", &MarketEnv::terminal)
        .def_property_readonly("num_agents", &MarketEnv::num_agents)
        .def_property_readonly("price", [](const MarketEnv& env) { return env.state().price; })
        .def_property_readonly("step_index",
                               [](const MarketEnv& env) { return env.state().step_index; })
        .def_property_readonly("holdings",
                               [](const MarketEnv& env) { return env.state().holdings; });

    py::enum_<RewardScheme>(m, "RewardScheme")
        .value("Independent", RewardScheme::Independent)
        .value("Cooperative", RewardScheme::Cooperative)
        .value("Competitive", RewardScheme::Competitive);

    m.def(
        "utility_reward",
        [](double holdings_before, double holdings_after, int steps_remaining_before,
           double lambda, const MarketParams& params, bool normalized) {
            const UtilityReward r = utility_reward(holdings_before, holdings_after,
                                                   steps_remaining_before, lambda, params,
                                                   normalized);
            return py::make_tuple(r.value, r.normalization_applied);
        },
        py::arg("holdings_before"), py::arg("holdings_after"),
        py::arg("steps_remaining_before"), py::arg("lambda_"), py::arg("params"),
        py::arg("normalized") = true);

    m.def(
        "shape_rewards",
        [](RewardScheme scheme, const std::vector<double>& raw) {
            return shape_rewards(scheme, raw).shaped;
        },
        py::arg("scheme"), py::arg("raw"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("agents", &ExperimentConfig::agents)
        .def_readwrite("scheme", &ExperimentConfig::scheme)
        .def_readwrite("normalized_rewards", &ExperimentConfig::normalized_rewards)
        .def_readwrite("lag_depth", &ExperimentConfig::lag_depth)
        .def_readwrite("episodes", &ExperimentConfig::episodes)
        .def_readwrite("eval_episodes", &ExperimentConfig::eval_episodes)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def("derive", &ExperimentConfig::derive)
        .def("validate", &ExperimentConfig::validate);

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("serialize_config", &serialize_config, py::arg("config"));

    py::class_<CsvArtifact>(m, "CsvArtifact")
        .def_readonly("path", &CsvArtifact::path)
        .def_readonly("schema", &CsvArtifact::schema)
        .def_readonly("row_count", &CsvArtifact::row_count);
    py::class_<RunResult>(m, "RunResult")
        .def_readonly("exit_code", &RunResult::exit_code)
        .def_readonly("artifacts", &RunResult::artifacts);
    m.def("run_command", &run_command, py::arg("command"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
