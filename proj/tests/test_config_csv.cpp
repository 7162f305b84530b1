#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "liquidsim/config.hpp"
#include "liquidsim/csv.hpp"
#include "liquidsim/errors.hpp"

using namespace liquidsim;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("parse_config: empty document yields the default single-agent setup") {
    const ExperimentConfig c = parse_config("");
    CHECK(c.agents.size() == 1);
    CHECK(c.agents[0].initial_shares == 1e6);
    CHECK(c.agents[0].risk_aversion == 1e-6);
    CHECK(c.scheme == RewardScheme::Independent);
    CHECK(c.lag_depth == 5);
    CHECK(c.episodes == 3000);
    const MarketParams p = c.derive();
    CHECK(p.initial_price == 50.0);
    CHECK(p.tau == 1.0);
    CHECK(p.epsilon == 0.0625);
}

TEST_CASE("parse_config: two-agent split and comments") {
    const std::string text = R"(# a 0.3M / 0.7M split
agents = 2
agent.1.shares = 0.3e6
agent.1.lambda = 1e-6
agent.2.shares = 0.7e6   # the larger seller
agent.2.lambda = 1e-6
scheme = independent
)";
    const ExperimentConfig c = parse_config(text);
    REQUIRE(c.agents.size() == 2);
    CHECK(c.agents[0].initial_shares == 0.3e6);
    CHECK(c.agents[1].initial_shares == 0.7e6);
    CHECK(c.total_agent_shares() == 1e6);
    CHECK(c.derive().total_shares == 1e6);
}

TEST_CASE("parse_config: descriptive errors name the key") {
    CHECK_THROWS_WITH_AS(parse_config("agent.1.lambda = -1\nagent.1.shares = 1e6\n"),
                         doctest::Contains("agent.1.lambda"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("volatility = 0.2\n"), doctest::Contains("unknown key"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("episodes = soon\n"), doctest::Contains("episodes"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config("agents = 2\nagent.1.shares = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scheme = cooperative\n"), ConfigError);  // needs 2 agents
    CHECK_THROWS_AS(parse_config("this line has no equals\n"), ConfigError);
}

TEST_CASE("parse_config: round-trip through serialize_config") {
    const std::string text = R"(agents = 2
agent.1.shares = 0.5e6
agent.1.lambda = 1e-4
agent.2.shares = 0.5e6
agent.2.lambda = 1e-9
scheme = competitive
episodes = 123
seed = 987654321
actor_lr = 2e-4
noise_sigma = 0.17
)";
    const ExperimentConfig c = parse_config(text);
    const ExperimentConfig rt = parse_config(serialize_config(c));
    CHECK(serialize_config(rt) == serialize_config(c));
    CHECK(rt.agents[1].risk_aversion == 1e-9);
    CHECK(rt.scheme == RewardScheme::Competitive);
    CHECK(rt.episodes == 123);
    CHECK(rt.seed == 987654321);
    CHECK(rt.ddpg.actor_lr == 2e-4);
    CHECK(rt.ddpg.noise.sigma == 0.17);
}

TEST_CASE("emit_csv: header, rows, and full-precision numbers") {
    const auto dir = std::filesystem::temp_directory_path() / "liquidsim_csv_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "out.csv").string();

    SUBCASE("empty rows give a header-only file") {
        const CsvArtifact a = emit_csv({}, {"alpha", "beta"}, path);
        CHECK(a.row_count == 0);
        CHECK(slurp(path) == "alpha,beta\n");
    }

    SUBCASE("numbers keep full precision and reproduce byte-identically") {
        const std::vector<CsvRow> rows = {
            {std::int64_t{0}, 0.1, std::string("x")},
            {std::int64_t{1}, 227083.33333333334, std::string("y")},
        };
        emit_csv(rows, {"step", "value", "tag"}, path);
        const std::string first = slurp(path);
        CHECK(first ==
              "step,value,tag\n0,0.10000000000000001,x\n1,227083.33333333334,y\n");
        emit_csv(rows, {"step", "value", "tag"}, path);
        CHECK(slurp(path) == first);
    }

    SUBCASE("row width must match the schema") {
        CHECK_THROWS_AS(emit_csv({{1.0}}, {"a", "b"}, path), InvalidParameter);
    }
}
