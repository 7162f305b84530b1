#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "liquidsim/analytic.hpp"
#include "liquidsim/errors.hpp"
#include "liquidsim/experiments.hpp"
#include "liquidsim/training.hpp"

using namespace liquidsim;

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentConfig tiny_config(const std::string& out_dir, int episodes = 8) {
    ExperimentConfig c;
    c.episodes = episodes;
    c.eval_episodes = 4;
    c.seed = 20240601;
    c.out_dir = out_dir;
    return c;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "liquidsim_exp" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("run_command: analytic emits trajectories and shortfalls") {
    const auto dir = fresh_dir("analytic");
    const RunResult r = run_command("analytic", tiny_config(dir.string()));
    CHECK(r.exit_code == 0);
    REQUIRE(r.artifacts.size() == 2);
    CHECK(r.artifacts[0].row_count == 61);  // steps 0..60
    CHECK(r.artifacts[1].row_count == 3);   // one row per lambda

    // the 1e-9 column is near-linear: midpoint close to half the position
    const std::string text = slurp(r.artifacts[0].path);
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "step,holdings_lambda_0.0001,holdings_lambda_1e-06,holdings_lambda_1e-09");
    for (int i = 0; i <= 30; ++i) std::getline(lines, line);
    const auto last_comma = line.rfind(',');
    const double mid_low_lambda = std::stod(line.substr(last_comma + 1));
    CHECK(mid_low_lambda / 1e6 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("run_command: verify-theorems passes on the baseline setup") {
    const auto dir = fresh_dir("theorems");
    const RunResult r = run_command("verify-theorems", tiny_config(dir.string()));
    CHECK(r.exit_code == 0);
    REQUIRE(r.artifacts.size() == 1);
    const std::string text = slurp(r.artifacts[0].path);
    CHECK(text.find("fail") == std::string::npos);
    CHECK(text.find("theorem1") != std::string::npos);
    CHECK(text.find("theorem2") != std::string::npos);
}

TEST_CASE("run_command: train and evaluate emit curves and trajectories") {
    const auto dir = fresh_dir("train");
    const RunResult r = run_command("train", tiny_config(dir.string()));
    CHECK(r.exit_code == 0);
    REQUIRE(r.artifacts.size() == 3);
    CHECK(r.artifacts[0].row_count == 8);   // one row per episode
    CHECK(r.artifacts[1].row_count == 61);  // mean trajectory
    CHECK(r.artifacts[2].row_count == 1);   // summary per agent
    CHECK(fs::exists(dir / "training_curve.csv"));
    CHECK(fs::exists(dir / "mean_trajectory.csv"));
    CHECK(fs::exists(dir / "summary.csv"));
}

TEST_CASE("run_command: presets are deterministic byte for byte") {
    for (const std::string command : {"analytic", "verify-theorems", "train"}) {
        CAPTURE(command);
        const auto dir_a = fresh_dir("det_a_" + command);
        const auto dir_b = fresh_dir("det_b_" + command);
        const RunResult ra = run_command(command, tiny_config(dir_a.string(), 5));
        const RunResult rb = run_command(command, tiny_config(dir_b.string(), 5));
        REQUIRE(ra.artifacts.size() == rb.artifacts.size());
        for (std::size_t i = 0; i < ra.artifacts.size(); ++i)
            CHECK(slurp(ra.artifacts[i].path) == slurp(rb.artifacts[i].path));
    }
}

TEST_CASE("run_command: fig2 analytic ordering holds in the emitted csv") {
    const auto dir = fresh_dir("fig2");
    const RunResult r = run_command("fig2", tiny_config(dir.string(), 5));
    CHECK(r.exit_code == 0);
    const std::string text = slurp((dir / "fig2_shortfalls.csv").string());

    // pull analytic_optimal_E for rows A and B1+B2
    double e_a = 0.0;
    double e_split = 0.0;
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string agent, shares, analytic;
        std::getline(cells, agent, ',');
        std::getline(cells, shares, ',');
        std::getline(cells, analytic, ',');
        if (agent == "A") e_a = std::stod(analytic);
        if (agent == "B1+B2") e_split = std::stod(analytic);
    }
    CHECK(e_a > e_split);
    CHECK(e_a == doctest::Approx(478435.32465951063).epsilon(1e-10));
}

TEST_CASE("run_command: fig5 includes the frozen linear competitor") {
    const auto dir = fresh_dir("fig5");
    const RunResult r = run_command("fig5", tiny_config(dir.string(), 5));
    CHECK(r.exit_code == 0);
    const std::string text = slurp((dir / "fig5_trajectories.csv").string());
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    CHECK(line ==
          "step,host_vs_competitor,competitor_linear,host_single,host_analytic_optimal");
    // competitor holdings drop linearly: step 30 leaves exactly half of 0.5e6
    for (int i = 0; i <= 30; ++i) std::getline(lines, line);
    std::istringstream cells(line);
    std::string step, host, competitor;
    std::getline(cells, step, ',');
    std::getline(cells, host, ',');
    std::getline(cells, competitor, ',');
    CHECK(std::stod(competitor) == doctest::Approx(250000.0).epsilon(1e-9));
}

TEST_CASE("run_command: unknown command raises a config error") {
    CHECK_THROWS_AS(run_command("fig9", tiny_config(fresh_dir("bad").string())), ConfigError);
}

TEST_CASE("scripted linear seller liquidates exactly linearly") {
    const MarketParams p = ExperimentConfig{}.derive();
    std::vector<AgentSlot> slots;
    slots.push_back(scripted_linear_seller());
    const EnvFactory factory = [&](std::uint64_t seed) {
        return MarketEnv::create(p, {{1, 1e6, 1e-9}}, 5, seed);
    };
    const EvaluationResult eval = evaluate_policy(factory, slots, 3, 77);
    for (int k = 0; k <= 60; ++k)
        CHECK(eval.mean_trajectory[0][static_cast<std::size_t>(k)] ==
              doctest::Approx(1e6 * (1.0 - k / 60.0)).epsilon(1e-9));
}

TEST_CASE("run_training: zero episodes give an empty log") {
    const MarketParams p = ExperimentConfig{}.derive();
    DdpgConfig dconfig;
    DdpgAgent agent(Observation::dimension(5), dconfig, 5);
    std::vector<AgentSlot> slots(1);
    slots[0].learner = &agent;
    const EnvFactory factory = [&](std::uint64_t seed) {
        return MarketEnv::create(p, {{1, 1e6, 1e-6}}, 5, seed);
    };
    const TrainingLog log = run_training(factory, slots, RewardScheme::Independent, 0, 1);
    CHECK(log.episodes() == 0);
}

TEST_CASE("run_training: untrained half-selling policy shape") {
    // zero-weight actor acts 0.5 everywhere: holdings halve per step until the
    // forced terminal sale
    const MarketParams p = ExperimentConfig{}.derive();
    DdpgConfig dconfig;
    DdpgAgent agent(Observation::dimension(5), dconfig, 5);
    for (auto& l : agent.mutable_actor().layers) {
        std::fill(l.weights.begin(), l.weights.end(), 0.0);
        std::fill(l.biases.begin(), l.biases.end(), 0.0);
    }
    std::vector<AgentSlot> slots(1);
    slots[0].learner = &agent;
    const EnvFactory factory = [&](std::uint64_t seed) {
        return MarketEnv::create(p, {{1, 1e6, 1e-6}}, 5, seed);
    };
    const EvaluationResult eval = evaluate_policy(factory, slots, 2, 3);
    CHECK(eval.mean_trajectory[0][1] == doctest::Approx(0.5e6).epsilon(1e-12));
    CHECK(eval.mean_trajectory[0][2] == doctest::Approx(0.25e6).epsilon(1e-12));
    CHECK(eval.mean_trajectory[0][60] == 0.0);
}

TEST_CASE("run_training: determinism of the full loop") {
    const MarketParams p = ExperimentConfig{}.derive();
    DdpgConfig dconfig;
    dconfig.minibatch_size = 16;

    auto run = [&](std::uint64_t seed) {
        DdpgAgent agent(Observation::dimension(5), dconfig, seed);
        std::vector<AgentSlot> slots(1);
        slots[0].learner = &agent;
        const EnvFactory factory = [&](std::uint64_t s) {
            return MarketEnv::create(p, {{1, 1e6, 1e-6}}, 5, s);
        };
        return run_training(factory, slots, RewardScheme::Independent, 4, seed);
    };
    const TrainingLog a = run(31);
    const TrainingLog b = run(31);
    CHECK(a.shortfalls == b.shortfalls);
    CHECK(a.shaped_reward_sums == b.shaped_reward_sums);
    CHECK(a.trajectories == b.trajectories);
    CHECK(a.episode_seeds == b.episode_seeds);
}
