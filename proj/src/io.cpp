#include "stacklab/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "stacklab/errors.hpp"

namespace stacklab {

using nlohmann::json;

namespace {

[[noreturn]] void key_error(const std::string& path, const std::string& what) {
  throw ParseError("config key '" + path + "': " + what);
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) key_error(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) key_error(path, "expected a number");
  return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) key_error(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) key_error(path, "expected a string");
  return j.get<std::string>();
}

Matrix<double> matrix_from_json(const json& j, int rows, int cols, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) key_error(path, "expected " + std::to_string(rows) + " rows");
  Matrix<double> m(rows, cols);
  for (int a = 0; a < rows; ++a) {
    const json& row = j[a];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      key_error(path + "[" + std::to_string(a) + "]", "expected " + std::to_string(cols) + " entries");
    for (int b = 0; b < cols; ++b) m(a, b) = get_number(row[b], path + "[" + std::to_string(a) + "][" + std::to_string(b) + "]");
  }
  return m;
}

GameSource parse_game(const json& j) {
  GameSource src;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "table1")
      src.explicit_game = table1_game();
    else if (name == "nonconvergence")
      src.explicit_game = nonconvergence_game();
    else
      key_error("game", "unknown named game '" + name + "'");
    return src;
  }
  if (!j.is_object()) key_error("game", "expected a name or an object");
  if (j.contains("random")) {
    reject_unknown(j, "game", {"random"});
    const json& r = j["random"];
    if (!r.is_object()) key_error("game.random", "expected an object");
    reject_unknown(r, "game.random", {"A", "B", "seed"});
    if (r.contains("A")) src.A = static_cast<int>(get_integer(r["A"], "game.random.A"));
    if (r.contains("B")) src.B = static_cast<int>(get_integer(r["B"], "game.random.B"));
    if (r.contains("seed")) src.seed = static_cast<std::uint64_t>(get_integer(r["seed"], "game.random.seed"));
    return src;
  }
  try {
    src.explicit_game = game_from_json(j);
  } catch (const ContractViolation& e) {
    key_error("game", e.what());
  }
  return src;
}

LeaderAlgo leader_algo(const std::string& s) {
  if (s == "exp3") return LeaderAlgo::kExp3;
  if (s == "ucbe") return LeaderAlgo::kUcbe;
  if (s == "ucb") return LeaderAlgo::kUcb;
  key_error("leader.algorithm", "unknown leader algorithm '" + s + "'");
}

FollowerAlgo follower_algo(const std::string& s) {
  if (s == "ucb") return FollowerAlgo::kUcb;
  if (s == "fbm") return FollowerAlgo::kFbm;
  if (s == "fmucb") return FollowerAlgo::kFmucb;
  if (s == "fbm_pessimistic") return FollowerAlgo::kFbmPessimistic;
  key_error("follower.strategy", "unknown follower strategy '" + s + "'");
}

Information information(const std::string& s) {
  if (s == "limited") return Information::kLimited;
  if (s == "side") return Information::kSide;
  if (s == "omniscient") return Information::kOmniscient;
  key_error("follower.information", "unknown information setting '" + s + "'");
}

Information default_information(FollowerAlgo algo) {
  switch (algo) {
    case FollowerAlgo::kUcb: return Information::kLimited;
    case FollowerAlgo::kFmucb: return Information::kSide;
    default: return Information::kOmniscient;
  }
}

LeaderParams parse_leader(const json& j) {
  LeaderParams p;
  if (j.is_string()) {
    p.algo = leader_algo(j.get<std::string>());
    return p;
  }
  if (!j.is_object()) key_error("leader", "expected a name or an object");
  reject_unknown(j, "leader", {"algorithm", "alpha", "eta", "s0", "s0_multiplier", "epsilon", "delta"});
  if (!j.contains("algorithm")) key_error("leader.algorithm", "missing");
  p.algo = leader_algo(get_string(j["algorithm"], "leader.algorithm"));
  if (j.contains("alpha")) p.alpha = get_number(j["alpha"], "leader.alpha");
  if (j.contains("eta")) p.eta = get_number(j["eta"], "leader.eta");
  if (j.contains("s0")) p.s0 = get_number(j["s0"], "leader.s0");
  if (j.contains("s0_multiplier")) p.s0_multiplier = get_number(j["s0_multiplier"], "leader.s0_multiplier");
  if (j.contains("epsilon")) p.epsilon = get_number(j["epsilon"], "leader.epsilon");
  if (j.contains("delta")) p.delta = get_number(j["delta"], "leader.delta");
  return p;
}

FollowerParams parse_follower(const json& j) {
  FollowerParams p;
  if (j.is_string()) {
    p.algo = follower_algo(j.get<std::string>());
    p.info = default_information(p.algo);
    return p;
  }
  if (!j.is_object()) key_error("follower", "expected a name or an object");
  reject_unknown(j, "follower", {"strategy", "delta", "information"});
  if (!j.contains("strategy")) key_error("follower.strategy", "missing");
  p.algo = follower_algo(get_string(j["strategy"], "follower.strategy"));
  p.info = j.contains("information") ? information(get_string(j["information"], "follower.information"))
                                     : default_information(p.algo);
  if (j.contains("delta")) p.delta = get_number(j["delta"], "follower.delta");
  return p;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

json game_to_json(const GameInstance& game) {
  json j;
  j["A"] = game.A();
  j["B"] = game.B();
  for (const char* key : {"mu_l", "mu_f"}) {
    const auto& m = std::string(key) == "mu_l" ? game.mu_l() : game.mu_f();
    json rows = json::array();
    for (int a = 0; a < game.A(); ++a) {
      json row = json::array();
      for (int b = 0; b < game.B(); ++b) row.push_back(m(a, b));
      rows.push_back(row);
    }
    j[key] = rows;
  }
  return j;
}

GameInstance game_from_json(const json& j) {
  if (!j.is_object()) throw ContractViolation("game must be an object");
  for (const char* key : {"A", "B", "mu_l", "mu_f"})
    if (!j.contains(key)) throw ContractViolation(std::string("game is missing '") + key + "'");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "A" && it.key() != "B" && it.key() != "mu_l" && it.key() != "mu_f")
      throw ContractViolation("unknown game key '" + it.key() + "'");
  if (!j["A"].is_number_integer() || !j["B"].is_number_integer())
    throw ContractViolation("A and B must be integers");
  const int A = j["A"].get<int>(), B = j["B"].get<int>();
  if (A < 1 || B < 1) throw ContractViolation("A and B must be >= 1");
  try {
    return GameInstance(matrix_from_json(j["mu_l"], A, B, "game.mu_l"), matrix_from_json(j["mu_f"], A, B, "game.mu_f"));
  } catch (const ParseError& e) {
    throw ContractViolation(e.what());
  }
}

SimConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("config parse error at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  reject_unknown(doc, "", {"game", "leader", "follower", "T", "seeds", "noise", "trace_every", "window", "checkpoints"});

  SimConfig cfg;
  if (!doc.contains("game")) key_error("game", "missing");
  if (!doc.contains("leader")) key_error("leader", "missing");
  if (!doc.contains("follower")) key_error("follower", "missing");
  if (!doc.contains("T")) key_error("T", "missing");
  cfg.game = parse_game(doc["game"]);
  cfg.leader = parse_leader(doc["leader"]);
  cfg.follower = parse_follower(doc["follower"]);
  cfg.horizon = get_integer(doc["T"], "T");
  if (doc.contains("seeds")) {
    const json& s = doc["seeds"];
    if (!s.is_array()) key_error("seeds", "expected an array of integers");
    cfg.seeds.clear();
    for (std::size_t i = 0; i < s.size(); ++i)
      cfg.seeds.push_back(static_cast<std::uint64_t>(get_integer(s[i], "seeds[" + std::to_string(i) + "]")));
  }
  if (doc.contains("noise")) {
    const std::string n = get_string(doc["noise"], "noise");
    if (n == "bernoulli")
      cfg.noise = NoiseMode::kBernoulli;
    else if (n == "noiseless")
      cfg.noise = NoiseMode::kNoiseless;
    else
      key_error("noise", "expected 'bernoulli' or 'noiseless'");
  }
  if (doc.contains("trace_every")) cfg.trace_every = get_integer(doc["trace_every"], "trace_every");
  if (doc.contains("window")) cfg.window = get_integer(doc["window"], "window");
  if (doc.contains("checkpoints")) {
    const json& c = doc["checkpoints"];
    if (!c.is_array()) key_error("checkpoints", "expected an array of integers");
    for (std::size_t i = 0; i < c.size(); ++i)
      cfg.checkpoints.push_back(get_integer(c[i], "checkpoints[" + std::to_string(i) + "]"));
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_trace_csv(const std::vector<RunResult>& runs, const SimConfig& config,
                     const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "run_seed,t,a,b,r_l,r_f,leader_algo,follower_algo\n";
  const std::string leader = to_string(config.leader.algo);
  const std::string follower = to_string(config.follower.algo);
  for (const auto& run : runs)
    for (const auto& r : run.trace)
      out << run.metrics.seed << ',' << r.t << ',' << r.a << ',' << r.b << ',' << format_number(r.r_l) << ','
          << format_number(r.r_f) << ',' << leader << ',' << follower << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "checkpoint_t,metric,mean,std,n_seeds\n";
  for (const auto& r : rows)
    out << r.checkpoint_t << ',' << r.metric << ',' << format_number(r.mean) << ',' << format_number(r.std) << ','
        << r.n_seeds << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "checkpoint_t,metric,mean,std,n_seeds")
    throw std::runtime_error("'" + path.string() + "' has no summary header");
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string t, metric, mean, sd, n;
    if (!std::getline(ss, t, ',') || !std::getline(ss, metric, ',') || !std::getline(ss, mean, ',') ||
        !std::getline(ss, sd, ',') || !std::getline(ss, n))
      throw std::runtime_error("malformed summary row in '" + path.string() + "': " + line);
    rows.push_back({std::stoll(t), metric, std::stod(mean), std::stod(sd), std::stoi(n)});
  }
  return rows;
}

}  // namespace stacklab
