#include "synckit/errors.hpp"
#include "synckit/io.hpp"
#include "synckit/simulate.hpp"
#include "synckit/synthesis.hpp"
#include "synckit/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using synckit::io::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoGuarantee = 3;
constexpr int kExitNumerical = 4;

struct CliConfig {
  std::string pair_text;
  std::string graph_text;
  std::string gain_text;
  std::string x0_text = "random";
  std::string statement;
  std::string out_dir;
  std::optional<double> delta;
  double t_end = 0.0;  // 0: derive from the graph
  int steps = 400;
  double margin = 0.0;
  int p_max = 200;
  std::uint64_t seed = 0;
  double tol_eig = 0.0;  // 0: scale-aware default
  double tol_gram = 1e-8;
  double tol_care = 1e-8;
  double tol_int = 1e-5;
};

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

// Accepts inline JSON (leading '{' or '[') or a path to a JSON file.
json json_or_file(const std::string& text, const std::string& what) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& err) {
      throw synckit::ValidationError(what + ": inline JSON is malformed: " +
                                     err.what());
    }
  }
  return synckit::io::load_json_file(text);
}

synckit::SystemPair load_pair(const CliConfig& cfg) {
  if (cfg.pair_text.empty()) {
    throw synckit::ValidationError("missing --pair");
  }
  return synckit::io::pair_from_json(json_or_file(cfg.pair_text, "pair"));
}

synckit::Interconnection load_graph(const CliConfig& cfg) {
  if (cfg.graph_text.empty()) {
    throw synckit::ValidationError("missing --graph");
  }
  if (cfg.graph_text.rfind("ring:", 0) == 0) {
    return synckit::io::graph_from_string(cfg.graph_text);
  }
  return synckit::io::graph_from_json(json_or_file(cfg.graph_text, "graph"));
}

synckit::Vec load_x0(const CliConfig& cfg, int dim, std::uint64_t seed) {
  if (cfg.x0_text == "random" || cfg.x0_text.empty()) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    synckit::Vec x0(dim);
    for (int i = 0; i < dim; ++i) x0[i] = dist(rng);
    return x0;
  }
  const json j = json_or_file(cfg.x0_text, "x0");
  if (!j.is_array()) {
    throw synckit::ValidationError("x0: expected a JSON array");
  }
  if (static_cast<int>(j.size()) != dim) {
    throw synckit::ValidationError("x0: expected length " + std::to_string(dim) +
                                   ", got " + std::to_string(j.size()));
  }
  synckit::Vec x0(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[i].is_number()) {
      throw synckit::ValidationError("x0: entries must be numbers");
    }
    x0[i] = j[i].get<double>();
  }
  return x0;
}

synckit::SynthOptions synth_options(const CliConfig& cfg) {
  synckit::SynthOptions opt;
  opt.eig_tol = cfg.tol_eig;
  opt.gram_tol = cfg.tol_gram;
  opt.care_tol = cfg.tol_care;
  return opt;
}

// Collects the files a command writes and their manifest entries.
class OutputSink {
 public:
  explicit OutputSink(std::string dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& text) {
    if (dir_.empty()) return;
    const fs::path path = fs::path(dir_) / name;
    synckit::io::write_text_file(path, text);
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(synckit::io::fnv1a64(text)));
    manifest_.push_back(json{{"path", path.string()},
                             {"bytes", text.size()},
                             {"fnv1a64", hex}});
  }

  json manifest() const { return manifest_; }

 private:
  std::string dir_;
  json manifest_ = json::array();
};

json base_report(const std::string& command, const CliConfig& cfg) {
  return json{{"command", command},
              {"timestamp", iso_timestamp()},
              {"seed", cfg.seed},
              {"tolerances",
               json{{"eig", cfg.tol_eig},
                    {"gram", cfg.tol_gram},
                    {"care", cfg.tol_care},
                    {"int", cfg.tol_int}}}};
}

void emit(json report, const OutputSink& sink) {
  report["files"] = sink.manifest();
  std::cout << report.dump(2) << "\n";
}

double classify_tol(const CliConfig& cfg, const synckit::Mat& a) {
  return cfg.tol_eig > 0.0 ? cfg.tol_eig : synckit::default_eig_tol(a);
}

int run_classify(const CliConfig& cfg) {
  const auto pair = load_pair(cfg);
  const auto report = synckit::classify(pair, classify_tol(cfg, pair.A));
  OutputSink sink(cfg.out_dir);
  const json body = synckit::io::to_json(report);
  sink.write("classification.json", body.dump(2) + "\n");
  json out = base_report("classify", cfg);
  out["pair"] = synckit::io::to_json(pair);
  out["classification"] = body;
  emit(std::move(out), sink);
  return kExitOk;
}

int run_synthesize(const CliConfig& cfg) {
  const auto pair = load_pair(cfg);
  const auto classification = synckit::classify(pair, classify_tol(cfg, pair.A));
  const auto gain = synckit::synth_auto(pair, cfg.delta, synth_options(cfg));
  OutputSink sink(cfg.out_dir);
  const json gain_json = synckit::io::to_json(gain);
  sink.write("gain.json", gain_json.dump(2) + "\n");
  json out = base_report("synthesize", cfg);
  out["pair"] = synckit::io::to_json(pair);
  out["classification"] = synckit::io::to_json(classification);
  out["gain"] = gain_json;
  emit(std::move(out), sink);
  return kExitOk;
}

int run_simulate(const CliConfig& cfg) {
  const auto pair = load_pair(cfg);
  const auto graph = load_graph(cfg);

  json gain_json;
  synckit::Mat gain_matrix;
  if (!cfg.gain_text.empty()) {
    const auto gain = synckit::io::gain_from_json(
        json_or_file(cfg.gain_text, "gain"));
    gain_matrix = gain.L;
    gain_json = synckit::io::to_json(gain);
  } else {
    const auto gain = synckit::synth_auto(pair, cfg.delta, synth_options(cfg));
    gain_matrix = gain.L;
    gain_json = synckit::io::to_json(gain);
  }
  if (gain_matrix.rows() != pair.state_dim() ||
      gain_matrix.cols() != pair.output_dim()) {
    throw synckit::ValidationError("gain: L has the wrong shape for the pair");
  }

  const int dim = graph.node_count() * pair.state_dim();
  const synckit::ArraySpec spec{pair.A, gain_matrix * pair.C, graph,
                                load_x0(cfg, dim, cfg.seed)};
  const double t_end =
      cfg.t_end > 0.0 ? cfg.t_end : synckit::default_t_end(graph);
  const auto traj = synckit::simulate_array(spec, t_end, cfg.steps, cfg.tol_int);
  const auto summary = synckit::sync_metrics(traj);

  OutputSink sink(cfg.out_dir);
  const json summary_json = synckit::io::to_json(summary);
  sink.write("gain.json", gain_json.dump(2) + "\n");
  sink.write("trajectory.csv", synckit::io::trajectory_csv(traj));
  sink.write("summary.json", summary_json.dump(2) + "\n");

  json out = base_report("simulate", cfg);
  out["pair"] = synckit::io::to_json(pair);
  out["graph"] = synckit::io::to_json(graph);
  out["gain"] = gain_json;
  out["t_end"] = t_end;
  out["steps"] = cfg.steps;
  out["x0"] = std::vector<double>(spec.x0.data(), spec.x0.data() + spec.x0.size());
  out["simulation"] = summary_json;
  if (!graph.is_connected()) {
    out["warnings"] = json::array(
        {"graph is not connected; predicted trajectory tracking omitted"});
  }
  emit(std::move(out), sink);
  return kExitOk;
}

int run_verify(const CliConfig& cfg) {
  OutputSink sink(cfg.out_dir);
  json out = base_report("verify", cfg);

  if (!cfg.statement.empty()) {
    if (cfg.statement.size() != 1) {
      throw synckit::ValidationError("verify: statement must be one of e, f, g, h");
    }
    synckit::DemoOptions opt;
    opt.p_max = cfg.p_max;
    opt.steps = cfg.steps;
    if (!cfg.gain_text.empty()) {
      opt.gain = synckit::io::gain_from_json(json_or_file(cfg.gain_text, "gain")).L;
    }
    const auto report = synckit::demo_statement(cfg.statement[0], opt);
    const json body = synckit::io::to_json(report);
    sink.write("counterexample.json", body.dump(2) + "\n");
    sink.write("trajectory.csv", synckit::io::trajectory_csv(report.trajectory));
    out["counterexample"] = body;
    emit(std::move(out), sink);
    return kExitOk;
  }

  const auto pair = load_pair(cfg);
  const auto graph = load_graph(cfg);
  if (cfg.gain_text.empty()) {
    throw synckit::ValidationError(
        "verify: need --gain (or --statement) alongside --pair/--graph");
  }
  const auto gain =
      synckit::io::gain_from_json(json_or_file(cfg.gain_text, "gain"));
  const auto verdict = synckit::spectral_sync_test(
      pair.A, gain.L * pair.C, graph, cfg.margin);
  const json body = synckit::io::to_json(verdict);
  sink.write("verdict.json", body.dump(2) + "\n");
  out["pair"] = synckit::io::to_json(pair);
  out["graph"] = synckit::io::to_json(graph);
  out["gain"] = synckit::io::to_json(gain);
  out["verdict"] = body;
  emit(std::move(out), sink);
  return kExitOk;
}

int run_demo(CliConfig cfg) {
  // end-to-end oscillator showcase: position/velocity agents coupled through
  // their velocity reading synchronize on any connected graph
  if (cfg.graph_text.empty()) cfg.graph_text = "ring:3";
  synckit::Mat c(1, 2);
  c << 0.0, 1.0;
  synckit::Mat a(2, 2);
  a << 0.0, 1.0, -1.0, 0.0;
  const synckit::SystemPair pair(c, a);
  const auto graph = load_graph(cfg);

  const auto classification = synckit::classify(pair, classify_tol(cfg, a));
  const auto gain = synckit::synth_auto(pair, std::nullopt, synth_options(cfg));
  const auto verdict =
      synckit::spectral_sync_test(a, gain.L * c, graph, cfg.margin);

  const int dim = graph.node_count() * 2;
  const synckit::ArraySpec spec{a, gain.L * c, graph, load_x0(cfg, dim, cfg.seed)};
  const double t_end =
      cfg.t_end > 0.0 ? cfg.t_end : 10.0 * synckit::default_t_end(graph);
  const auto traj = synckit::simulate_array(spec, t_end, cfg.steps, cfg.tol_int);
  const auto summary = synckit::sync_metrics(traj);

  OutputSink sink(cfg.out_dir);
  sink.write("classification.json",
             synckit::io::to_json(classification).dump(2) + "\n");
  sink.write("gain.json", synckit::io::to_json(gain).dump(2) + "\n");
  sink.write("verdict.json", synckit::io::to_json(verdict).dump(2) + "\n");
  sink.write("trajectory.csv", synckit::io::trajectory_csv(traj));
  sink.write("summary.json", synckit::io::to_json(summary).dump(2) + "\n");

  json out = base_report("demo", cfg);
  out["pair"] = synckit::io::to_json(pair);
  out["graph"] = synckit::io::to_json(graph);
  out["classification"] = synckit::io::to_json(classification);
  out["gain"] = synckit::io::to_json(gain);
  out["verdict"] = synckit::io::to_json(verdict);
  out["t_end"] = t_end;
  out["simulation"] = synckit::io::to_json(summary);
  emit(std::move(out), sink);
  return kExitOk;
}

void apply_config_file(CliConfig& cfg, const std::string& path) {
  const json j = synckit::io::load_json_file(path);
  if (!j.is_object()) {
    throw synckit::ValidationError("config: expected a JSON object");
  }
  const auto text_of = [](const json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  if (j.contains("pair")) cfg.pair_text = text_of(j["pair"]);
  if (j.contains("graph")) cfg.graph_text = text_of(j["graph"]);
  if (j.contains("gain")) cfg.gain_text = text_of(j["gain"]);
  if (j.contains("x0")) cfg.x0_text = text_of(j["x0"]);
  if (j.contains("statement")) cfg.statement = j["statement"].get<std::string>();
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("t_end")) cfg.t_end = j["t_end"].get<double>();
  if (j.contains("steps")) cfg.steps = j["steps"].get<int>();
  if (j.contains("margin")) cfg.margin = j["margin"].get<double>();
  if (j.contains("p_max")) cfg.p_max = j["p_max"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("tol_eig")) cfg.tol_eig = j["tol_eig"].get<double>();
  if (j.contains("tol_gram")) cfg.tol_gram = j["tol_gram"].get<double>();
  if (j.contains("tol_care")) cfg.tol_care = j["tol_care"].get<double>();
  if (j.contains("tol_int")) cfg.tol_int = j["tol_int"].get<double>();
}

void add_common_options(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--out", cfg.out_dir, "directory for report files");
  cmd->add_option("--seed", cfg.seed, "seed for generated initial states");
  cmd->add_option("--tol-eig", cfg.tol_eig,
                  "axis tolerance (default: 1e-8 scaled by the matrix norm)");
  cmd->add_option("--tol-gram", cfg.tol_gram, "Gram quadrature tolerance");
  cmd->add_option("--tol-care", cfg.tol_care, "Riccati residual tolerance");
  cmd->add_option("--tol-int", cfg.tol_int, "integrator consistency tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig cfg;

  // the config file seeds the defaults; explicit flags override it
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        apply_config_file(cfg, argv[i + 1]);
      } catch (const synckit::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
      }
    }
  }

  CLI::App app{"synchronizing-gain synthesis and simulation for coupled "
               "linear system arrays"};
  app.require_subcommand(1);
  std::string config_path;

  auto* classify_cmd = app.add_subcommand("classify", "membership of a pair in "
                                          "the stability/output classes");
  classify_cmd->add_option("--config", config_path, "JSON config file");
  classify_cmd->add_option("--pair", cfg.pair_text, "pair JSON (inline or file)");
  add_common_options(classify_cmd, cfg);

  auto* synth_cmd = app.add_subcommand("synthesize", "pick and compute a "
                                       "synchronizing gain");
  synth_cmd->add_option("--config", config_path, "JSON config file");
  synth_cmd->add_option("--pair", cfg.pair_text, "pair JSON (inline or file)");
  synth_cmd->add_option("--delta", cfg.delta,
                        "minimum coupling rate for the Riccati branch");
  add_common_options(synth_cmd, cfg);

  auto* sim_cmd = app.add_subcommand("simulate", "integrate a coupled array");
  sim_cmd->add_option("--config", config_path, "JSON config file");
  sim_cmd->add_option("--pair", cfg.pair_text, "pair JSON (inline or file)");
  sim_cmd->add_option("--graph", cfg.graph_text,
                      "graph JSON, matrix JSON, file, or ring:p");
  sim_cmd->add_option("--gain", cfg.gain_text,
                      "gain JSON (inline or file); synthesized when absent");
  sim_cmd->add_option("--delta", cfg.delta, "delta for auto-synthesis");
  sim_cmd->add_option("--t-end", cfg.t_end, "horizon (default 20/|Re lambda2|)");
  sim_cmd->add_option("--steps", cfg.steps, "grid intervals");
  sim_cmd->add_option("--x0", cfg.x0_text,
                      "initial state array, file, or 'random'");
  add_common_options(sim_cmd, cfg);

  auto* verify_cmd = app.add_subcommand(
      "verify", "spectral synchronization test or a counterexample replay");
  verify_cmd->add_option("--config", config_path, "JSON config file");
  verify_cmd->add_option("--statement", cfg.statement,
                         "counterexample id: e, f, g or h");
  verify_cmd->add_option("--pair", cfg.pair_text, "pair JSON (inline or file)");
  verify_cmd->add_option("--graph", cfg.graph_text,
                         "graph JSON, matrix JSON, file, or ring:p");
  verify_cmd->add_option("--gain", cfg.gain_text, "gain JSON (inline or file)");
  verify_cmd->add_option("--margin", cfg.margin, "stability margin per mode");
  verify_cmd->add_option("--p-max", cfg.p_max, "ring search bound");
  verify_cmd->add_option("--steps", cfg.steps, "grid intervals for the replay");
  add_common_options(verify_cmd, cfg);

  auto* demo_cmd = app.add_subcommand(
      "demo", "oscillator showcase: classify, synthesize, verify, simulate");
  demo_cmd->add_option("--config", config_path, "JSON config file");
  demo_cmd->add_option("--graph", cfg.graph_text, "graph (default ring:3)");
  demo_cmd->add_option("--t-end", cfg.t_end, "horizon");
  demo_cmd->add_option("--steps", cfg.steps, "grid intervals");
  add_common_options(demo_cmd, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify_cmd->parsed()) return run_classify(cfg);
    if (synth_cmd->parsed()) return run_synthesize(cfg);
    if (sim_cmd->parsed()) return run_simulate(cfg);
    if (verify_cmd->parsed()) return run_verify(cfg);
    if (demo_cmd->parsed()) return run_demo(cfg);
  } catch (const synckit::NoGuaranteeError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNoGuarantee;
  } catch (const synckit::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const synckit::DimensionError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const synckit::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
