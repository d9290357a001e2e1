#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "normdyn/error.hpp"
#include "normdyn/games.hpp"
#include "normdyn/generators.hpp"

namespace normdyn {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "normdyn.run/1";

enum class Model { bass, cascade, axelrod, naming_game, game };

struct GraphSource {
  std::optional<std::string> file;
  GraphKind kind = kind::Complete{};
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;  // defaults to the run seed
};

struct BassSection {
  double p = 0.001;
  double q = 0.1;
  double z0 = 0.0;
};

struct CascadeSection {
  std::vector<double> theta;  // size 1 = uniform value
  std::vector<NodeId> seeds;
  bool strict = false;
};

struct AxelrodSection {
  std::size_t traits = 3;
  std::vector<std::vector<Action>> init;  // empty = random from run seed
  std::size_t checkpoint_every = 0;       // 0 = once per n steps
};

struct NamingGameSection {
  std::size_t objects = 1;
  double committed_fraction = 0.0;
  Word committed_word = 1;
  bool pre_consensus = true;
  std::size_t pre_consensus_rounds = 100000;
};

struct InitialState {
  enum class Kind { fill, bernoulli, explicit_states } kind = Kind::fill;
  Action action = 0;
  double p = 0.5;
  StateVector states;
};

struct CommittedSpec {
  std::vector<NodeId> agents;
  std::optional<double> fraction;  // random agents drawn from the run seed
  Action action = 1;
  Action prior_action = 0;
  std::optional<std::size_t> switch_round;
};

struct ClassSpec {
  games::ClassWeights weights;
  double fraction = 1.0;
};

struct GameSection {
  enum class PayoffForm { matrix, coordination, extended } form = PayoffForm::coordination;
  games::PayoffMatrix matrix;
  double alpha = 0.0;
  std::vector<ClassSpec> classes;
  std::vector<std::uint32_t> assignment;  // explicit per-agent class; empty = by fractions
  games::Rule rule = games::Rule::loglinear;
  double beta = 1.0;
  games::Schedule schedule = games::Schedule::async_uniform;
  games::TrendScope trend_scope = games::TrendScope::population;
  InitialState initial;
  CommittedSpec committed;
};

/// Complete description of one run. Everything random derives from `seed`.
struct SimConfig {
  Model model = Model::bass;
  std::uint64_t seed = 0;
  std::size_t horizon = 100;
  std::size_t cadence = 1;
  GraphSource graph;
  BassSection bass;
  CascadeSection cascade;
  AxelrodSection axelrod;
  NamingGameSection naming_game;
  GameSection game;
};

namespace config_detail {

inline void allow_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : keys) ok = ok || key == k;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const Json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

inline const char* model_name(Model m) {
  switch (m) {
    case Model::bass: return "bass";
    case Model::cascade: return "cascade";
    case Model::axelrod: return "axelrod";
    case Model::naming_game: return "naming_game";
    case Model::game: return "game";
  }
  return "bass";
}

template <typename E>
E pick(const std::string& value, std::initializer_list<std::pair<const char*, E>> options, const std::string& where) {
  for (const auto& [name, e] : options)
    if (value == name) return e;
  throw ConfigError(where + ": unknown value '" + value + "'");
}

inline GraphSource parse_graph(const Json& j) {
  allow_keys(j, {"file", "kind", "n", "k", "p", "m", "rows", "cols", "seed"}, "graph");
  GraphSource g;
  if (j.contains("seed")) g.seed = get<std::uint64_t>(j, "seed", 0, "graph");
  if (j.contains("file")) {
    if (j.contains("kind")) throw ConfigError("graph: give either 'file' or 'kind'");
    g.file = get<std::string>(j, "file", "", "graph");
    return g;
  }
  const auto name = get<std::string>(j, "kind", "complete", "graph");
  g.n = get<std::size_t>(j, "n", 0, "graph");
  const auto k = get<std::size_t>(j, "k", 2, "graph");
  const auto p = get<double>(j, "p", 0.0, "graph");
  if (name == "complete") g.kind = kind::Complete{};
  else if (name == "ring_lattice") g.kind = kind::RingLattice{k};
  else if (name == "grid2d") {
    const auto rows = get<std::size_t>(j, "rows", 1, "graph");
    const auto cols = get<std::size_t>(j, "cols", 1, "graph");
    g.kind = kind::Grid2d{rows, cols};
    if (!j.contains("n")) g.n = rows * cols;
  } else if (name == "erdos_renyi") g.kind = kind::ErdosRenyi{p};
  else if (name == "watts_strogatz") g.kind = kind::WattsStrogatz{k, p};
  else if (name == "barabasi_albert") g.kind = kind::BarabasiAlbert{get<std::size_t>(j, "m", 1, "graph")};
  else throw ConfigError("graph.kind: unknown kind '" + name + "'");
  return g;
}

inline Json graph_to_json(const GraphSource& g) {
  Json j;
  if (g.file) {
    j["file"] = *g.file;
  } else {
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kind::Complete>) j["kind"] = "complete";
          else if constexpr (std::is_same_v<K, kind::RingLattice>) { j["kind"] = "ring_lattice"; j["k"] = k.k; }
          else if constexpr (std::is_same_v<K, kind::Grid2d>) { j["kind"] = "grid2d"; j["rows"] = k.rows; j["cols"] = k.cols; }
          else if constexpr (std::is_same_v<K, kind::ErdosRenyi>) { j["kind"] = "erdos_renyi"; j["p"] = k.p; }
          else if constexpr (std::is_same_v<K, kind::WattsStrogatz>) { j["kind"] = "watts_strogatz"; j["k"] = k.k; j["p"] = k.p; }
          else { j["kind"] = "barabasi_albert"; j["m"] = k.m; }
        },
        g.kind);
    j["n"] = g.n;
  }
  if (g.seed) j["seed"] = *g.seed;
  return j;
}

inline InitialState parse_initial(const Json& j) {
  allow_keys(j, {"kind", "action", "p", "states"}, "game.initial");
  InitialState s;
  const auto k = get<std::string>(j, "kind", "fill", "game.initial");
  s.kind = pick<InitialState::Kind>(
      k, {{"fill", InitialState::Kind::fill}, {"bernoulli", InitialState::Kind::bernoulli}, {"explicit", InitialState::Kind::explicit_states}},
      "game.initial.kind");
  s.action = get<Action>(j, "action", 0, "game.initial");
  s.p = get<double>(j, "p", 0.5, "game.initial");
  s.states = get<StateVector>(j, "states", {}, "game.initial");
  if (s.action > 1) throw ConfigError("game.initial.action must be 0 or 1");
  for (Action a : s.states)
    if (a > 1) throw ConfigError("game.initial.states must be 0/1");
  return s;
}

inline ClassSpec parse_class(const Json& j) {
  allow_keys(j, {"b", "k", "r", "beta", "fraction"}, "game.payoff.classes[]");
  ClassSpec c;
  c.weights.b = get<double>(j, "b", 1.0, "class");
  c.weights.k = get<double>(j, "k", 0.0, "class");
  c.weights.r = get<double>(j, "r", 0.0, "class");
  c.weights.beta = get<double>(j, "beta", 1.0, "class");
  c.fraction = get<double>(j, "fraction", 1.0, "class");
  return c;
}

inline GameSection parse_game(const Json& j) {
  allow_keys(j, {"payoff", "rule", "beta", "schedule", "trend_scope", "initial", "committed"}, "game");
  GameSection g;
  if (j.contains("payoff")) {
    const auto& p = j.at("payoff");
    if (p.contains("classes")) {
      allow_keys(p, {"classes", "assignment"}, "game.payoff");
      g.form = GameSection::PayoffForm::extended;
      for (const auto& c : p.at("classes")) g.classes.push_back(parse_class(c));
      g.assignment = get<std::vector<std::uint32_t>>(p, "assignment", {}, "game.payoff");
    } else if (p.contains("alpha")) {
      allow_keys(p, {"alpha"}, "game.payoff");
      g.form = GameSection::PayoffForm::coordination;
      g.alpha = get<double>(p, "alpha", 0.0, "game.payoff");
    } else {
      allow_keys(p, {"a", "b", "c", "d"}, "game.payoff");
      g.form = GameSection::PayoffForm::matrix;
      g.matrix = {get<double>(p, "a", 1, "game.payoff"), get<double>(p, "b", 0, "game.payoff"),
                  get<double>(p, "c", 0, "game.payoff"), get<double>(p, "d", 1, "game.payoff")};
    }
  }
  g.rule = pick<games::Rule>(get<std::string>(j, "rule", "loglinear", "game"),
                             {{"best_response", games::Rule::best_response}, {"loglinear", games::Rule::loglinear}}, "game.rule");
  g.beta = get<double>(j, "beta", 1.0, "game");
  g.schedule = pick<games::Schedule>(get<std::string>(j, "schedule", "async_uniform", "game"),
                                     {{"synchronous", games::Schedule::synchronous}, {"async_uniform", games::Schedule::async_uniform}},
                                     "game.schedule");
  g.trend_scope = pick<games::TrendScope>(get<std::string>(j, "trend_scope", "population", "game"),
                                          {{"population", games::TrendScope::population}, {"neighbors", games::TrendScope::neighbors}},
                                          "game.trend_scope");
  if (j.contains("initial")) g.initial = parse_initial(j.at("initial"));
  if (j.contains("committed")) {
    const auto& c = j.at("committed");
    allow_keys(c, {"agents", "fraction", "action", "prior_action", "switch_round"}, "game.committed");
    g.committed.agents = get<std::vector<NodeId>>(c, "agents", {}, "game.committed");
    if (c.contains("fraction")) g.committed.fraction = get<double>(c, "fraction", 0.0, "game.committed");
    g.committed.action = get<Action>(c, "action", 1, "game.committed");
    g.committed.prior_action = get<Action>(c, "prior_action", 0, "game.committed");
    if (c.contains("switch_round")) g.committed.switch_round = get<std::size_t>(c, "switch_round", 0, "game.committed");
    if (!g.committed.agents.empty() && g.committed.fraction) throw ConfigError("game.committed: give agents or fraction, not both");
    if (g.committed.action > 1 || g.committed.prior_action > 1) throw ConfigError("game.committed: actions must be 0 or 1");
  }
  return g;
}

inline const char* rule_name(games::Rule r) { return r == games::Rule::best_response ? "best_response" : "loglinear"; }
inline const char* schedule_name(games::Schedule s) {
  return s == games::Schedule::synchronous ? "synchronous" : "async_uniform";
}

inline Json game_to_json(const GameSection& g) {
  Json j;
  Json payoff;
  switch (g.form) {
    case GameSection::PayoffForm::matrix:
      payoff = {{"a", g.matrix.a}, {"b", g.matrix.b}, {"c", g.matrix.c}, {"d", g.matrix.d}};
      break;
    case GameSection::PayoffForm::coordination:
      payoff = {{"alpha", g.alpha}};
      break;
    case GameSection::PayoffForm::extended: {
      Json classes = Json::array();
      for (const auto& c : g.classes)
        classes.push_back({{"b", c.weights.b}, {"k", c.weights.k}, {"r", c.weights.r}, {"beta", c.weights.beta}, {"fraction", c.fraction}});
      payoff["classes"] = classes;
      if (!g.assignment.empty()) payoff["assignment"] = g.assignment;
      break;
    }
  }
  j["payoff"] = payoff;
  j["rule"] = rule_name(g.rule);
  j["beta"] = g.beta;
  j["schedule"] = schedule_name(g.schedule);
  j["trend_scope"] = g.trend_scope == games::TrendScope::population ? "population" : "neighbors";
  Json init;
  switch (g.initial.kind) {
    case InitialState::Kind::fill: init = {{"kind", "fill"}, {"action", g.initial.action}}; break;
    case InitialState::Kind::bernoulli: init = {{"kind", "bernoulli"}, {"p", g.initial.p}}; break;
    case InitialState::Kind::explicit_states: init = {{"kind", "explicit"}, {"states", g.initial.states}}; break;
  }
  j["initial"] = init;
  Json c;
  if (g.committed.fraction) c["fraction"] = *g.committed.fraction;
  else c["agents"] = g.committed.agents;
  c["action"] = g.committed.action;
  c["prior_action"] = g.committed.prior_action;
  if (g.committed.switch_round) c["switch_round"] = *g.committed.switch_round;
  j["committed"] = c;
  return j;
}

}  // namespace config_detail

/// Parses a run configuration. Unknown keys anywhere are rejected.
inline SimConfig parse_config(const Json& j) {
  using namespace config_detail;
  allow_keys(j, {"schema", "model", "seed", "horizon", "cadence", "graph", "bass", "cascade", "axelrod", "naming_game", "game"},
             "config");
  const auto schema = get<std::string>(j, "schema", "", "config");
  if (schema != kConfigSchema) throw ConfigError(std::string("config.schema must be '") + kConfigSchema + "'");
  SimConfig cfg;
  cfg.model = pick<Model>(get<std::string>(j, "model", "", "config"),
                          {{"bass", Model::bass}, {"cascade", Model::cascade}, {"axelrod", Model::axelrod},
                           {"naming_game", Model::naming_game}, {"game", Model::game}},
                          "config.model");
  cfg.seed = get<std::uint64_t>(j, "seed", 0, "config");
  cfg.horizon = get<std::size_t>(j, "horizon", cfg.horizon, "config");
  cfg.cadence = get<std::size_t>(j, "cadence", 1, "config");
  if (cfg.cadence == 0) throw ConfigError("config.cadence must be positive");
  if (j.contains("graph")) cfg.graph = parse_graph(j.at("graph"));

  if (j.contains("bass")) {
    const auto& b = j.at("bass");
    allow_keys(b, {"p", "q", "z0"}, "bass");
    cfg.bass = {get<double>(b, "p", cfg.bass.p, "bass"), get<double>(b, "q", cfg.bass.q, "bass"), get<double>(b, "z0", 0.0, "bass")};
  }
  if (j.contains("cascade")) {
    const auto& c = j.at("cascade");
    allow_keys(c, {"theta", "seeds", "strict"}, "cascade");
    if (c.contains("theta")) {
      if (c.at("theta").is_array()) cfg.cascade.theta = get<std::vector<double>>(c, "theta", {}, "cascade");
      else cfg.cascade.theta = {get<double>(c, "theta", 0.5, "cascade")};
    }
    cfg.cascade.seeds = get<std::vector<NodeId>>(c, "seeds", {}, "cascade");
    cfg.cascade.strict = get<bool>(c, "strict", false, "cascade");
  }
  if (j.contains("axelrod")) {
    const auto& a = j.at("axelrod");
    allow_keys(a, {"traits", "init", "checkpoint_every"}, "axelrod");
    cfg.axelrod.traits = get<std::size_t>(a, "traits", 3, "axelrod");
    if (a.contains("init") && !(a.at("init").is_string() && a.at("init") == "random")) {
      cfg.axelrod.init = get<std::vector<std::vector<Action>>>(a, "init", {}, "axelrod");
    }
    cfg.axelrod.checkpoint_every = get<std::size_t>(a, "checkpoint_every", 0, "axelrod");
  }
  if (j.contains("naming_game")) {
    const auto& ng = j.at("naming_game");
    allow_keys(ng, {"objects", "committed_fraction", "committed_word", "pre_consensus", "pre_consensus_rounds"}, "naming_game");
    cfg.naming_game.objects = get<std::size_t>(ng, "objects", 1, "naming_game");
    cfg.naming_game.committed_fraction = get<double>(ng, "committed_fraction", 0.0, "naming_game");
    cfg.naming_game.committed_word = get<Word>(ng, "committed_word", 1, "naming_game");
    cfg.naming_game.pre_consensus = get<bool>(ng, "pre_consensus", true, "naming_game");
    cfg.naming_game.pre_consensus_rounds = get<std::size_t>(ng, "pre_consensus_rounds", 100000, "naming_game");
  }
  if (j.contains("game")) cfg.game = parse_game(j.at("game"));
  return cfg;
}

inline SimConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

/// Fully resolved configuration (defaults filled in); parse_config(to_json(c)) == c.
inline Json to_json(const SimConfig& cfg) {
  using namespace config_detail;
  Json j;
  j["schema"] = kConfigSchema;
  j["model"] = model_name(cfg.model);
  j["seed"] = cfg.seed;
  j["horizon"] = cfg.horizon;
  j["cadence"] = cfg.cadence;
  switch (cfg.model) {
    case Model::bass:
      j["bass"] = {{"p", cfg.bass.p}, {"q", cfg.bass.q}, {"z0", cfg.bass.z0}};
      return j;
    case Model::cascade:
      j["graph"] = graph_to_json(cfg.graph);
      j["cascade"] = {{"theta", cfg.cascade.theta}, {"seeds", cfg.cascade.seeds}, {"strict", cfg.cascade.strict}};
      return j;
    case Model::axelrod: {
      j["graph"] = graph_to_json(cfg.graph);
      Json a = {{"traits", cfg.axelrod.traits}, {"checkpoint_every", cfg.axelrod.checkpoint_every}};
      if (cfg.axelrod.init.empty()) a["init"] = "random";
      else a["init"] = cfg.axelrod.init;
      j["axelrod"] = a;
      return j;
    }
    case Model::naming_game:
      j["graph"] = graph_to_json(cfg.graph);
      j["naming_game"] = {{"objects", cfg.naming_game.objects},
                          {"committed_fraction", cfg.naming_game.committed_fraction},
                          {"committed_word", cfg.naming_game.committed_word},
                          {"pre_consensus", cfg.naming_game.pre_consensus},
                          {"pre_consensus_rounds", cfg.naming_game.pre_consensus_rounds}};
      return j;
    case Model::game:
      j["graph"] = graph_to_json(cfg.graph);
      j["game"] = game_to_json(cfg.game);
      return j;
  }
  return j;
}

}  // namespace normdyn
