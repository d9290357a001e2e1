// normdyn: command-line driver for the normdyn simulation library.

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "normdyn/bass.hpp"
#include "normdyn/calibrate.hpp"
#include "normdyn/cascade.hpp"
#include "normdyn/config.hpp"
#include "normdyn/csv.hpp"
#include "normdyn/edge_list.hpp"
#include "normdyn/engine.hpp"
#include "normdyn/error.hpp"
#include "normdyn/generators.hpp"
#include "normdyn/metrics.hpp"
#include "normdyn/parallel.hpp"
#include "normdyn/trajectory.hpp"
#include "normdyn/valente.hpp"
#include "normdyn/version.hpp"

namespace fs = std::filesystem;
using namespace normdyn;

namespace {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Collects outputs and input digests for the run manifest.
class Session {
 public:
  explicit Session(fs::path dir) : dir_(std::move(dir)) {}

  void input(const std::string& path) { inputs_.push_back({{"path", path}, {"sha256", sha256_hex(slurp(path))}}); }

  void output(const std::string& name, const std::string& content) {
    fs::create_directories(dir_);
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw InputError("failed writing '" + path.string() + "'");
    outputs_.push_back({{"path", name}, {"sha256", sha256_hex(content)}});
  }

  template <typename Writer>
  void output_with(const std::string& name, Writer&& write) {
    std::ostringstream s;
    write(s);
    output(name, s.str());
  }

  void json(const std::string& name, const Json& j) { output(name, j.dump(2) + "\n"); }

  void manifest(const std::string& command, std::optional<std::uint64_t> seed, const Json& arguments,
                const std::optional<Json>& config = std::nullopt) {
    Json m;
    m["schema"] = "normdyn.manifest/1";
    m["tool"] = "normdyn";
    m["version"] = kVersion;
    m["command"] = command;
    m["seed"] = seed ? Json(*seed) : Json(nullptr);
    m["arguments"] = arguments;
    if (config) m["config"] = *config;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  Json inputs_ = Json::array();
  Json outputs_ = Json::array();
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t workers = default_workers();
  std::string out_dir = ".";
};

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const IdentifiabilityError*>(&e) ||
      dynamic_cast<const AnalysisError*>(&e) || dynamic_cast<const PayoffUndefinedError*>(&e))
    return 3;
  if (dynamic_cast<const Error*>(&e)) return 2;
  return 1;
}

// -- analyses -----------------------------------------------------------------

void write_exposure(Session& s, const Trajectory& traj, const Graph& g) {
  const auto rec = cascade::exposure_at_adoption(traj, g);
  std::vector<std::size_t> defined;
  std::vector<double> times, exposures;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (!rec[i].exposure) continue;
    defined.push_back(i);
    times.push_back(static_cast<double>(*rec[i].adopt_time));
    exposures.push_back(*rec[i].exposure);
  }
  std::vector<std::optional<cascade::SigmaCategory>> by_time(rec.size()), by_threshold(rec.size());
  Json summary;
  summary["defined"] = defined.size();
  summary["agreement"] = nullptr;
  try {
    const auto ct = cascade::classify_sigma_categories(times);
    const auto ce = cascade::classify_sigma_categories(exposures);
    for (std::size_t k = 0; k < defined.size(); ++k) {
      by_time[defined[k]] = ct[k];
      by_threshold[defined[k]] = ce[k];
    }
    const auto tab = cascade::cross_tabulate(ct, ce);
    summary["agreement"] = tab.agreement;
    Json counts = Json::array();
    for (const auto& row : tab.counts) counts.push_back(Json(std::vector<std::size_t>(std::begin(row), std::end(row))));
    summary["contingency"] = counts;
  } catch (const AnalysisError& e) {
    summary["note"] = e.what();
  }
  s.output_with("exposure.csv", [&](std::ostream& out) {
    out << "agent,adopt_time,exposure,category_time,category_threshold\n";
    for (std::size_t i = 0; i < rec.size(); ++i) {
      out << i << ',' << (rec[i].adopt_time && rec[i].exposure ? std::to_string(*rec[i].adopt_time) : "NA") << ','
          << csv::num(rec[i].exposure) << ',' << (by_time[i] ? to_string(*by_time[i]) : "NA") << ','
          << (by_threshold[i] ? to_string(*by_threshold[i]) : "NA") << '\n';
    }
  });
  s.json("exposure.json", summary);
}

void write_switching(Session& s, const Trajectory& traj) {
  const auto rate = metrics::switching_rate(traj);
  s.output_with("switching.csv", [&](std::ostream& out) {
    out << "t,switching_rate\n";
    for (std::size_t k = 0; k < rate.size(); ++k) out << traj.t[k + 1] << ',' << csv::num(rate[k]) << '\n';
  });
}

void write_conformity(Session& s, const Trajectory& traj, const Graph& g) {
  if (traj.states.empty()) throw AnalysisError("conformity: trajectory has no agent states");
  const auto c = metrics::conformity_metrics(g, traj.states.back());
  s.json("conformity.json", {{"t", traj.t.back()}, {"edge_agreement", c.edge_agreement}, {"regions", c.regions}});
}

void write_s_shape(Session& s, const Trajectory& traj) {
  const auto r = metrics::s_shape_check(traj.z);
  s.json("s_shape.json", {{"monotone", r.monotone}, {"inflections", r.inflections}});
}

void write_switches(Session& s, const std::vector<Trajectory>& trajs, std::size_t horizon, std::size_t window) {
  const auto obs = calibrate::observe_switches(trajs, horizon, window);
  s.output_with("switches.csv", [&](std::ostream& out) { calibrate::write_observations(obs, out); });
}

// -- commands -----------------------------------------------------------------

struct GraphArgs {
  std::string kind;
  std::size_t n = 0, k = 2, m = 1, rows = 0, cols = 0;
  double p = 0.0;
  std::string out = "graph.edges";
};

int cmd_graph(const Globals& gl, const GraphArgs& a) {
  GraphKind kind;
  std::size_t n = a.n;
  if (a.kind == "complete") kind = kind::Complete{};
  else if (a.kind == "ring_lattice") kind = kind::RingLattice{a.k};
  else if (a.kind == "grid2d") {
    kind = kind::Grid2d{a.rows, a.cols};
    if (n == 0) n = a.rows * a.cols;
  } else if (a.kind == "erdos_renyi") kind = kind::ErdosRenyi{a.p};
  else if (a.kind == "watts_strogatz") kind = kind::WattsStrogatz{a.k, a.p};
  else if (a.kind == "barabasi_albert") kind = kind::BarabasiAlbert{a.m};
  else throw InputError("unknown graph kind '" + a.kind + "'");
  const std::uint64_t seed = gl.seed.value_or(0);
  const Graph g = generate(kind, n, seed);
  Session s(gl.out_dir);
  s.output_with(a.out, [&](std::ostream& out) { write_edge_list(g, out); });
  s.manifest("graph", seed,
             {{"kind", a.kind}, {"n", n}, {"k", a.k}, {"p", a.p}, {"m", a.m}, {"rows", a.rows}, {"cols", a.cols}, {"out", a.out}});
  return 0;
}

struct RunArgs {
  std::string config;
  std::vector<std::string> analyze;
  std::size_t reps = 1;
  std::size_t window = 0;
};

// Relative graph files resolve against the config file's directory.
SimConfig load_run_config(const std::string& path, std::optional<std::uint64_t> seed, Session& s) {
  s.input(path);
  SimConfig cfg = load_config(path);
  if (seed) cfg.seed = *seed;
  if (cfg.graph.file) {
    fs::path file(*cfg.graph.file);
    if (file.is_relative()) file = fs::path(path).parent_path() / file;
    s.input(file.string());
  }
  return cfg;
}

SimConfig with_resolved_paths(SimConfig cfg, const std::string& config_path) {
  if (cfg.graph.file) {
    fs::path file(*cfg.graph.file);
    if (file.is_relative()) cfg.graph.file = (fs::path(config_path).parent_path() / file).string();
  }
  return cfg;
}

int cmd_run(const Globals& gl, const RunArgs& a) {
  Session s(gl.out_dir);
  const SimConfig cfg = load_run_config(a.config, gl.seed, s);
  const SimConfig resolved = with_resolved_paths(cfg, a.config);
  for (const auto& what : a.analyze)
    if (what != "exposure" && what != "switching" && what != "conformity" && what != "s_shape" && what != "switches")
      throw InputError("unknown analysis '" + what + "'");
  const std::size_t window = a.window == 0 ? cfg.horizon : a.window;

  if (a.reps > 1) {
    for (const auto& what : a.analyze)
      if (what != "switches") throw InputError("--analyze " + what + " needs a single run (--reps 1)");
    const auto trajs = engine::ensemble_trajectories(resolved, a.reps, cfg.seed, gl.workers);
    const auto summary = engine::summarize(trajs, cfg.seed);
    s.output_with("summary.csv", [&](std::ostream& out) { engine::write_summary_csv(summary, out); });
    s.output_with("terminal.csv", [&](std::ostream& out) { engine::write_terminal_csv(summary, out); });
    if (!a.analyze.empty()) write_switches(s, trajs, cfg.horizon, window);
  } else {
    const auto out = engine::run(resolved);
    const auto& traj = out.trajectory;
    s.output_with("trajectory.csv", [&](std::ostream& o) { write_trajectory_csv(traj, o); });
    if (!out.regions.empty()) {
      s.output_with("regions.csv", [&](std::ostream& o) {
        o << "checkpoint,regions,largest_region_fraction\n";
        for (const auto& cp : out.regions) o << cp.step << ',' << cp.regions << ',' << csv::num(cp.largest_region_fraction) << '\n';
      });
    }
    if (cfg.model == Model::naming_game) {
      s.output_with("uptake.csv", [&](std::ostream& o) {
        o << "t,uptake,consensus_flag\n";
        for (std::size_t c = 0; c < traj.size(); ++c)
          o << traj.t[c] << ',' << csv::num(traj.z[c]) << ',' << int(out.consensus_flags[c]) << '\n';
      });
    }
    if (out.graph.relabeled)
      s.output_with("labels.csv", [&](std::ostream& o) { write_label_map(out.graph.labels, o); });
    for (const auto& what : a.analyze) {
      if (what == "exposure") write_exposure(s, traj, out.graph.graph);
      else if (what == "switching") write_switching(s, traj);
      else if (what == "conformity") write_conformity(s, traj, out.graph.graph);
      else if (what == "s_shape") write_s_shape(s, traj);
      else write_switches(s, {traj}, cfg.horizon, window);
    }
    s.json("summary.json", {{"model", config_detail::model_name(cfg.model)},
                            {"seed", cfg.seed},
                            {"terminal", to_string(traj.terminal)},
                            {"final_t", traj.t.back()},
                            {"final_z", traj.z.back()},
                            {"checkpoints", traj.size()}});
  }
  s.manifest("run", cfg.seed, {{"config", a.config}, {"analyze", a.analyze}, {"reps", a.reps}, {"window", window}}, to_json(cfg));
  return 0;
}

int cmd_fit_bass(const Globals& gl, const std::string& series_path) {
  Session s(gl.out_dir);
  s.input(series_path);
  const auto table = csv::read(series_path);
  const auto col = table.column("z");
  if (!col) throw ParseError(1, "series needs a 'z' column");
  bass::AdoptionSeries z;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (*col >= table.rows[r].size()) throw ParseError(table.row_lines[r], "missing z value");
    z.push_back(csv::to_double(table.rows[r][*col], table.row_lines[r]));
  }
  const auto fit = bass::fit(z);
  s.json("fit_bass.json", {{"p", fit.p}, {"q", fit.q}, {"rss", fit.rss}, {"points", z.size()}});
  s.manifest("fit bass", std::nullopt, {{"series", series_path}});
  return 0;
}

struct BkrArgs {
  std::string config, observed;
  std::size_t window = 0, classes = 1, reps = 50;
  double grid_step = 0.1;
  std::string norm = "mae";
};

int cmd_fit_bkr(const Globals& gl, const BkrArgs& a) {
  Session s(gl.out_dir);
  const SimConfig cfg = with_resolved_paths(load_run_config(a.config, std::nullopt, s), a.config);
  s.input(a.observed);
  const std::size_t window = a.window == 0 ? cfg.horizon : a.window;
  if (window == 0 || cfg.horizon % window != 0) throw InputError("--window must divide the scenario horizon");
  const std::size_t n = engine::resolve_graph(cfg).graph.node_count();
  std::ifstream in(a.observed, std::ios::binary);
  const auto obs = calibrate::parse_observations(in, n, cfg.horizon / window, window);

  calibrate::GridOptions opt;
  opt.grid_step = a.grid_step;
  opt.classes = a.classes;
  opt.reps = a.reps;
  opt.base_seed = gl.seed.value_or(cfg.seed);
  opt.workers = gl.workers;
  if (a.norm == "mae") opt.norm = calibrate::Norm::mae;
  else if (a.norm == "l2") opt.norm = calibrate::Norm::l2;
  else throw InputError("--norm must be mae or l2");
  const auto report = calibrate::grid_search_bkr(obs, cfg, opt);

  Json best = Json::array();
  for (std::size_t c = 0; c < report.best.size(); ++c)
    best.push_back({{"class", c}, {"b", report.best[c].b}, {"k", report.best[c].k}, {"r", report.best[c].r}, {"beta", report.best[c].beta}});
  s.output_with("grid.csv", [&](std::ostream& o) { calibrate::write_grid_csv(report, o); });
  s.json("calibration.json", {{"best", best},
                              {"objective", report.objective},
                              {"norm", a.norm},
                              {"grid_step", a.grid_step},
                              {"reps", a.reps},
                              {"base_seed", opt.base_seed},
                              {"assignment", report.assignment},
                              {"candidates", report.table.size() / report.best.size()}});
  s.manifest("fit bkr", opt.base_seed,
             {{"config", a.config}, {"observed", a.observed}, {"window", window}, {"classes", a.classes}, {"reps", a.reps},
              {"grid_step", a.grid_step}, {"norm", a.norm}},
             to_json(cfg));
  return 0;
}

struct SweepArgs {
  std::string config, model = "naming_game";
  std::vector<double> fractions;
  std::size_t reps = 20;
  double threshold = 0.5;
};

int cmd_sweep(const Globals& gl, const SweepArgs& a) {
  Session s(gl.out_dir);
  const SimConfig cfg = with_resolved_paths(load_run_config(a.config, std::nullopt, s), a.config);
  calibrate::SweepModel model{};
  if (a.model == "naming_game") model = calibrate::SweepModel::naming_game;
  else if (a.model == "game_extended") model = calibrate::SweepModel::game_extended;
  else if (a.model == "game_loglinear") model = calibrate::SweepModel::game_loglinear;
  else throw InputError("--model must be naming_game, game_extended or game_loglinear");
  calibrate::SweepOptions opt;
  opt.reps = a.reps;
  opt.base_seed = gl.seed.value_or(cfg.seed);
  opt.workers = gl.workers;
  opt.threshold = a.threshold;
  const auto r = calibrate::critical_mass_sweep(model, a.fractions, cfg, opt);
  s.output_with("tipping.csv", [&](std::ostream& o) { calibrate::write_tipping_csv(r, o); });
  auto opt_json = [](const std::optional<double>& v) { return v ? Json(*v) : Json("above sweep range"); };
  s.json("tipping.json", {{"threshold", r.threshold},
                          {"critical_mass", opt_json(r.critical_mass)},
                          {"band", {{"low", opt_json(r.band_low)}, {"high", opt_json(r.band_high)}}}});
  s.manifest("sweep tipping", opt.base_seed,
             {{"config", a.config}, {"model", a.model}, {"fractions", a.fractions}, {"reps", a.reps}, {"threshold", a.threshold}},
             to_json(cfg));
  return 0;
}

struct SeedArgs {
  std::string graph;
  double theta = 0.5;
  std::size_t k = 1;
  bool strict = false;
};

int cmd_seed_select(const Globals& gl, const SeedArgs& a) {
  Session s(gl.out_dir);
  s.input(a.graph);
  const auto file = read_edge_list(a.graph);
  const auto base = cascade::ThresholdProfile::uniform(file.graph.node_count(), a.theta);
  const auto sel = cascade::greedy_seed_selection(file.graph, base, a.k,
                                                  a.strict ? cascade::Comparison::strict : cascade::Comparison::at_least);
  std::vector<std::string> labels;
  for (NodeId v : sel.seeds) labels.push_back(file.labels[v]);
  s.json("seeds.json", {{"seeds", sel.seeds}, {"labels", labels}, {"spread", sel.spread}});
  s.manifest("seed-select", std::nullopt, {{"graph", a.graph}, {"theta", a.theta}, {"k", a.k}, {"strict", a.strict}});
  return 0;
}

struct AnalyzeArgs {
  std::string trajectory, graph, what;
  std::vector<NodeId> pinned;
};

int cmd_analyze(const Globals& gl, const AnalyzeArgs& a) {
  Session s(gl.out_dir);
  s.input(a.trajectory);
  std::ifstream in(a.trajectory, std::ios::binary);
  if (!in) throw InputError("cannot open '" + a.trajectory + "'");
  Trajectory traj = parse_trajectory_csv(in);
  for (NodeId i : a.pinned) {
    if (i >= traj.n) throw InputError("--pinned agent out of range");
    traj.pinned[i] = 1;
  }
  auto graph = [&] {
    if (a.graph.empty()) throw InputError("--graph is required for this analysis");
    s.input(a.graph);
    auto file = read_edge_list(a.graph);
    return file.graph;
  };
  if (a.what == "exposure") write_exposure(s, traj, graph());
  else if (a.what == "switching") write_switching(s, traj);
  else if (a.what == "conformity") write_conformity(s, traj, graph());
  else if (a.what == "s_shape") write_s_shape(s, traj);
  else throw InputError("unknown analysis '" + a.what + "'");
  s.manifest("analyze", std::nullopt, {{"trajectory", a.trajectory}, {"graph", a.graph}, {"what", a.what}, {"pinned", a.pinned}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normdyn: simulations of conventions, norms and social change on networks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals gl;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Seed for all randomness (overrides the config seed)");
  app.add_option("--workers", gl.workers, "Worker threads for ensembles, grids and sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", gl.out_dir, "Directory for output files")->capture_default_str();

  GraphArgs ga;
  auto* graph = app.add_subcommand("graph", "Generate a graph and write it as an edge list");
  graph->add_option("--kind", ga.kind, "complete | ring_lattice | grid2d | erdos_renyi | watts_strogatz | barabasi_albert")->required();
  graph->add_option("--n", ga.n, "Number of nodes");
  graph->add_option("--k", ga.k, "Ring degree (even)")->capture_default_str();
  graph->add_option("--p", ga.p, "Edge or rewiring probability");
  graph->add_option("--m", ga.m, "Edges per new node (barabasi_albert)")->capture_default_str();
  graph->add_option("--rows", ga.rows, "Grid rows");
  graph->add_option("--cols", ga.cols, "Grid columns");
  graph->add_option("--out", ga.out, "Output file name inside --out-dir")->capture_default_str();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run a configuration");
  run->add_option("config", ra.config, "Run configuration (JSON)")->required();
  run->add_option("--analyze", ra.analyze, "exposure | switching | conformity | s_shape | switches")->delimiter(',');
  run->add_option("--reps", ra.reps, "Replicates (seeds seed .. seed+reps-1)")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--window", ra.window, "Rounds per window for --analyze switches (default: horizon)");

  auto* fit = app.add_subcommand("fit", "Fit model parameters to data");
  fit->require_subcommand(1);
  std::string series_path;
  auto* fit_bass = fit->add_subcommand("bass", "Least-squares fit of p and q to an adoption series");
  fit_bass->add_option("--series", series_path, "CSV with a 'z' column")->required();
  BkrArgs ba;
  auto* fit_bkr = fit->add_subcommand("bkr", "Grid search for coordination/inertia/trend weights");
  fit_bkr->add_option("--config", ba.config, "Scenario configuration (game model)")->required();
  fit_bkr->add_option("--observed", ba.observed, "Observed switch counts: agent,window,switches")->required();
  fit_bkr->add_option("--window", ba.window, "Rounds per observation window (default: horizon)");
  fit_bkr->add_option("--grid-step", ba.grid_step, "Simplex grid spacing")->capture_default_str();
  fit_bkr->add_option("--classes", ba.classes, "Number of agent classes (1 or 2)")->capture_default_str();
  fit_bkr->add_option("--reps", ba.reps, "Ensemble size per candidate")->capture_default_str()->check(CLI::PositiveNumber);
  fit_bkr->add_option("--norm", ba.norm, "mae | l2")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps");
  sweep->require_subcommand(1);
  SweepArgs sa;
  auto* tipping = sweep->add_subcommand("tipping", "Committed-minority sweep of terminal uptake");
  tipping->add_option("--config", sa.config, "Scenario configuration")->required();
  tipping->add_option("--model", sa.model, "naming_game | game_extended | game_loglinear")->capture_default_str();
  tipping->add_option("--fractions", sa.fractions, "Committed fractions, strictly increasing")->delimiter(',')->required();
  tipping->add_option("--reps", sa.reps, "Replicates per fraction")->capture_default_str()->check(CLI::PositiveNumber);
  tipping->add_option("--threshold", sa.threshold, "Mean uptake that counts as tipped")->capture_default_str();

  SeedArgs sd;
  auto* seed_select = app.add_subcommand("seed-select", "Greedy seed selection for threshold cascades");
  seed_select->add_option("--graph", sd.graph, "Edge-list file")->required();
  seed_select->add_option("--theta", sd.theta, "Threshold of non-seed agents")->capture_default_str();
  seed_select->add_option("--k", sd.k, "Number of seeds")->capture_default_str();
  seed_select->add_flag("--strict", sd.strict, "Adopt only when exposure exceeds the threshold");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Analyze a recorded trajectory");
  analyze->add_option("--trajectory", aa.trajectory, "Trajectory CSV")->required();
  analyze->add_option("--graph", aa.graph, "Edge-list file (exposure, conformity)");
  analyze->add_option("--what", aa.what, "exposure | switching | conformity | s_shape")->required();
  analyze->add_option("--pinned", aa.pinned, "Agents whose state was fixed externally (e.g. seeds)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (*seed_opt) gl.seed = seed_value;

  try {
    if (*graph) return cmd_graph(gl, ga);
    if (*run) return cmd_run(gl, ra);
    if (*fit_bass) return cmd_fit_bass(gl, series_path);
    if (*fit_bkr) return cmd_fit_bkr(gl, ba);
    if (*tipping) return cmd_sweep(gl, sa);
    if (*seed_select) return cmd_seed_select(gl, sd);
    if (*analyze) return cmd_analyze(gl, aa);
  } catch (const std::exception& e) {
    std::cerr << "normdyn: " << e.what() << '\n';
    return exit_code(e);
  }
  return 2;
}
