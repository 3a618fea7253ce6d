#include "synckit/io.hpp"

#include "synckit/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace synckit::io {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

GainBranch branch_from_string(const std::string& s) {
  if (s == "hurwitz_zero") return GainBranch::hurwitz_zero;
  if (s == "algorithm1") return GainBranch::algorithm1;
  if (s == "fullstate_pinv") return GainBranch::fullstate_pinv;
  if (s == "riccati_delta") return GainBranch::riccati_delta;
  throw ValidationError("gain: unknown branch '" + s + "'");
}

GuaranteeSet guarantee_from_string(const std::string& s) {
  if (s == "G>=0") return GuaranteeSet::all;
  if (s == "G>0") return GuaranteeSet::connected;
  if (s == "G>=delta") return GuaranteeSet::min_coupling;
  throw ValidationError("gain: unknown guarantee '" + s + "'");
}

json complex_to_json(Complex z) { return json{z.real(), z.imag()}; }

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t fnv1a64(const std::string& text) {
  return fnv1a64(text.data(), text.size());
}

json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(what + ": expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw ValidationError(what + ": rows must be nonempty arrays");
  }
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
      throw ValidationError(what + ": ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) {
        throw ValidationError(what + ": entries must be numbers");
      }
      m(i, c) = j[i][c].get<double>();
    }
  }
  return m;
}

SystemPair pair_from_json(const json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("C")) {
    throw ValidationError("pair: expected an object with \"A\" and \"C\"");
  }
  return SystemPair(mat_from_json(j["C"], "pair C"), mat_from_json(j["A"], "pair A"));
}

json to_json(const SystemPair& pair) {
  return json{{"C", to_json(pair.C)}, {"A", to_json(pair.A)}};
}

Interconnection graph_from_json(const json& j) {
  if (!j.is_object()) {
    throw ValidationError("graph: expected an object");
  }
  if (j.contains("gamma")) {
    return Interconnection::from_matrix(mat_from_json(j["gamma"], "graph gamma"));
  }
  if (!j.contains("p") || !j["p"].is_number_integer()) {
    throw ValidationError("graph: expected \"p\" and \"edges\", or \"gamma\"");
  }
  const int p = j["p"].get<int>();
  std::vector<WeightedEdge> edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) {
      throw ValidationError("graph: \"edges\" must be an array of [i, j, w]");
    }
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 3) {
        throw ValidationError("graph: each edge must be [i, j, w]");
      }
      edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
  }
  return Interconnection::from_weighted_edges(p, edges);
}

Interconnection graph_from_string(const std::string& text) {
  if (text.rfind("ring:", 0) == 0) {
    int p = 0;
    try {
      p = std::stoi(text.substr(5));
    } catch (const std::exception&) {
      throw ValidationError("graph: malformed ring size in '" + text + "'");
    }
    return Interconnection::ring(p);
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("graph: not valid JSON (") + err.what() + ")");
  }
  return graph_from_json(j);
}

json to_json(const Interconnection& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) {
    edges.push_back(json{e.from, e.to, e.weight});
  }
  return json{{"p", g.node_count()},
              {"edges", std::move(edges)},
              {"gamma", to_json(g.gamma())}};
}

json to_json(const ClassReport& report) {
  json eigs = json::array();
  for (Eigen::Index i = 0; i < report.a_eigenvalues.size(); ++i) {
    eigs.push_back(complex_to_json(report.a_eigenvalues[i]));
  }
  json modes = json::array();
  for (const auto& m : report.modes) {
    modes.push_back(json{{"lambda", complex_to_json(m.lambda)},
                         {"pbh_rank", m.pbh_rank},
                         {"tested", m.tested}});
  }
  return json{{"hurwitz", report.hurwitz},
              {"neutrally_stable", report.neutrally_stable},
              {"no_unstable_modes", report.no_unstable_modes},
              {"full_column_rank", report.full_column_rank},
              {"detectable", report.detectable},
              {"evidence",
               json{{"a_eigenvalues", std::move(eigs)},
                    {"modes", std::move(modes)},
                    {"c_rank", report.c_rank},
                    {"eig_tol", report.eig_tol},
                    {"rank_cutoff", report.rank_cutoff}}}};
}

json to_json(const FeedbackGain& gain) {
  json diag = json::object();
  if (gain.diagnostics.center_dim >= 0) {
    diag["center_dim"] = gain.diagnostics.center_dim;
  }
  if (gain.branch == GainBranch::algorithm1 && gain.diagnostics.gram.size() > 0) {
    diag["gram"] = to_json(gain.diagnostics.gram);
    diag["gram_residual"] = gain.diagnostics.gram_residual;
    diag["gram_horizon"] = gain.diagnostics.gram_horizon;
  }
  if (gain.branch == GainBranch::riccati_delta) {
    diag["riccati_solution"] = to_json(gain.diagnostics.gram);
    diag["riccati_residual"] = gain.diagnostics.care_residual;
  }
  return json{{"L", to_json(gain.L)},
              {"branch", to_string(gain.branch)},
              {"guarantee", to_string(gain.guarantee)},
              {"delta", gain.delta ? json(*gain.delta) : json(nullptr)},
              {"diagnostics", std::move(diag)}};
}

FeedbackGain gain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("L")) {
    throw ValidationError("gain: expected an object with \"L\"");
  }
  FeedbackGain gain;
  gain.L = mat_from_json(j["L"], "gain L");
  if (j.contains("branch")) {
    gain.branch = branch_from_string(j["branch"].get<std::string>());
  }
  if (j.contains("guarantee")) {
    gain.guarantee = guarantee_from_string(j["guarantee"].get<std::string>());
  }
  if (j.contains("delta") && j["delta"].is_number()) {
    gain.delta = j["delta"].get<double>();
  }
  return gain;
}

json to_json(const SpectralVerdict& verdict) {
  json blocks = json::array();
  for (const auto& b : verdict.blocks) {
    blocks.push_back(json{{"lambda", complex_to_json(b.lambda)},
                          {"abscissa", b.abscissa},
                          {"hurwitz", b.hurwitz}});
  }
  return json{{"blocks", std::move(blocks)},
              {"all_hurwitz", verdict.all_hurwitz},
              {"margin", verdict.margin}};
}

json to_json(const SyncSummary& summary) {
  return json{{"initial_sync", summary.initial_sync},
              {"final_sync", summary.final_sync},
              {"decayed", summary.decayed},
              {"rate", summary.rate ? json(*summary.rate) : json(nullptr)},
              {"final_tracking",
               summary.final_tracking ? json(*summary.final_tracking) : json(nullptr)},
              {"decay_tol", summary.decay_tol}};
}

json to_json(const CounterexampleReport& report) {
  json out{{"statement", std::string(1, report.statement)},
           {"pair", to_json(report.pair)},
           {"graph", to_json(report.graph)},
           {"gain", to_json(report.gain)},
           {"witness", report.witness},
           {"witness_value", report.witness_value},
           {"verdict", to_json(report.verdict)},
           {"simulation", to_json(report.summary)}};
  if (report.ring) {
    out["ring"] = json{{"p", report.ring->p},
                       {"lambda", complex_to_json(report.ring->lambda)},
                       {"abscissa", report.ring->abscissa}};
  }
  return out;
}

std::string trajectory_csv(const ArrayTrajectory& traj) {
  std::ostringstream out;
  out << "t";
  for (int i = 1; i <= traj.nodes; ++i) {
    for (int k = 1; k <= traj.state_dim; ++k) {
      out << ",x[" << i << "][" << k << "]";
    }
  }
  out << ",sync_error";
  if (traj.tracking_error) out << ",tracking_error";
  out << "\n";
  for (Eigen::Index row = 0; row < traj.times.size(); ++row) {
    out << format_double(traj.times[row]);
    for (Eigen::Index c = 0; c < traj.states.cols(); ++c) {
      out << "," << format_double(traj.states(row, c));
    }
    out << "," << format_double(traj.sync_error[row]);
    if (traj.tracking_error) {
      out << "," << format_double((*traj.tracking_error)[row]);
    }
    out << "\n";
  }
  return out.str();
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open file: " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw ValidationError("malformed JSON in " + path.string() + ": " + err.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("cannot write file: " + path.string());
  }
  out << text;
}

}  // namespace synckit::io
