#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stacklab/errors.hpp"
#include "stacklab/io.hpp"
#include "support.hpp"

using namespace stacklab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "stacklab_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config") {
  const auto c = parse_config(R"({"game":"table1","leader":"exp3","follower":"ucb","T":100})");
  CHECK(c.horizon == 100);
  CHECK(c.leader.algo == LeaderAlgo::kExp3);
  CHECK(c.follower.algo == FollowerAlgo::kUcb);
  CHECK(c.follower.info == Information::kLimited);
  CHECK(c.game.resolve() == table1_game());
  CHECK(c.seeds == std::vector<std::uint64_t>{1});
}

TEST_CASE("full config") {
  const auto c = parse_config(R"({
    "game": {"random": {"A": 3, "B": 4, "seed": 7}},
    "leader": {"algorithm": "ucbe", "s0": 12.5, "delta": 0.05},
    "follower": {"strategy": "fmucb", "information": "side", "delta": 0.02},
    "T": 500, "seeds": [3, 4], "noise": "noiseless", "trace_every": 10,
    "window": 50, "checkpoints": [100, 500]})");
  CHECK(c.game.A == 3);
  CHECK(c.game.B == 4);
  CHECK(c.game.seed == 7);
  CHECK(*c.leader.s0 == 12.5);
  CHECK(c.follower.info == Information::kSide);
  CHECK(c.noise == NoiseMode::kNoiseless);
  CHECK(c.checkpoints == std::vector<std::int64_t>{100, 500});
  CHECK(parse_config(R"({"game":"table1","leader":"exp3","follower":"fmucb","T":5})").follower.info ==
        Information::kSide);
}

TEST_CASE("config errors name the offending key") {
  CHECK(error_of(R"({"game":"table1","leader":"exp3","follower":{"strategy":"fmucb","information":"limited"},"T":10})")
            .find("fmucb") != std::string::npos);
  CHECK(error_of(R"({"game":"table1","leader":{"algorithm":"exp3","alpha":-0.1},"follower":"ucb","T":10})")
            .find("alpha") != std::string::npos);
  CHECK(error_of(R"({"game":"table1","leader":"exp3","follower":"ucb","T":10,"colour":1})").find("colour") !=
        std::string::npos);
  CHECK(error_of(R"({"game":"table1","leader":"exp3","follower":"ucb"})").find("T") != std::string::npos);
  CHECK(error_of(R"({"game":"table9","leader":"exp3","follower":"ucb","T":10})").find("game") !=
        std::string::npos);
  CHECK_THROWS_AS(parse_config("{\"game\":\n  \"table1\",,}"), ParseError);
  CHECK(error_of("{\"game\":\n  \"table1\",,}").find("line 2") != std::string::npos);
}

TEST_CASE("explicit game round trip") {
  RngStream rng(3);
  const auto g = random_game(3, 2, rng);
  CHECK(game_from_json(game_to_json(g)) == g);
  CHECK_THROWS_AS(game_from_json(nlohmann::json::parse(R"({"A":1,"B":1,"mu_l":[[2]],"mu_f":[[0]]})")),
                  ContractViolation);
  CHECK_THROWS_AS(game_from_json(nlohmann::json::parse(R"({"A":1,"B":2,"mu_l":[[0]],"mu_f":[[0]]})")),
                  ContractViolation);
  CHECK(error_of(R"({"game":{"A":1,"B":1,"mu_l":[[2]],"mu_f":[[0]]},"leader":"exp3","follower":"ucb","T":5})")
            .find("game") != std::string::npos);
}

TEST_CASE("trace csv") {
  SimConfig c = parse_config(R"({"game":"table1","leader":"exp3","follower":"ucb","T":10})");
  const auto empty = scratch("empty.csv");
  write_trace_csv({}, c, empty);
  CHECK(slurp(empty) == "run_seed,t,a,b,r_l,r_f,leader_algo,follower_algo\n");

  RunResult run;
  run.metrics.seed = 4;
  run.trace = {RoundRecord{1, 0, 1, 1.0, 0.0}, RoundRecord{2, 1, 0, 0.0, 1.0}};
  const auto two = scratch("two.csv");
  write_trace_csv({run}, c, two);
  const auto text = slurp(two);
  CHECK(text.find('\r') == std::string::npos);
  const auto ls = lines(text);
  REQUIRE(ls.size() == 3);
  CHECK(ls[1] == "4,1,0,1,1,0,exp3,ucb");
  CHECK(ls[2] == "4,2,1,0,0,1,exp3,ucb");
}

TEST_CASE("summary csv round trip") {
  const std::vector<SummaryRow> rows = {{10, "cum_action_regret", 1.0 / 3.0, 0.125, 5},
                                        {20, "trailing_hit_rate", 0.999, 0.0, 5}};
  const auto p = scratch("summary.csv");
  write_summary_csv(rows, p);
  CHECK(lines(slurp(p)).front() == "checkpoint_t,metric,mean,std,n_seeds");
  const auto back = read_summary_csv(p);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].checkpoint_t == rows[i].checkpoint_t);
    CHECK(back[i].metric == rows[i].metric);
    CHECK(back[i].mean == doctest::Approx(rows[i].mean).epsilon(1e-12));
    CHECK(back[i].std == doctest::Approx(rows[i].std).epsilon(1e-12));
    CHECK(back[i].n_seeds == rows[i].n_seeds);
  }
  const auto again = scratch("summary2.csv");
  write_summary_csv(back, again);
  CHECK(slurp(p) == slurp(again));
}
