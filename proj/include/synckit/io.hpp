#pragma once

#include "synckit/interconnect.hpp"
#include "synckit/linops.hpp"
#include "synckit/simulate.hpp"
#include "synckit/synthesis.hpp"
#include "synckit/sysclass.hpp"
#include "synckit/verify.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace synckit::io {

using nlohmann::json;

/// FNV-1a over raw bytes; used for the output-file manifest.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& text);

json to_json(const Mat& m);
Mat mat_from_json(const json& j, const std::string& what);

/// {"A": [[...]], "C": [[...]]}
SystemPair pair_from_json(const json& j);
json to_json(const SystemPair& pair);

/// {"p": int, "edges": [[i, j, w], ...]} with 1-based indices, or
/// {"gamma": [[...]]}; the string form "ring:p" names the ring generator.
Interconnection graph_from_json(const json& j);
Interconnection graph_from_string(const std::string& text);
json to_json(const Interconnection& g);

json to_json(const ClassReport& report);

/// {"L": [[...]], "branch": ..., "guarantee": ..., "delta": ...,
///  "diagnostics": {...}}
json to_json(const FeedbackGain& gain);
FeedbackGain gain_from_json(const json& j);

json to_json(const SpectralVerdict& verdict);
json to_json(const SyncSummary& summary);
json to_json(const CounterexampleReport& report);

/// CSV with header t, x[1][1..n], ..., x[p][1..n], sync_error and, when the
/// trajectory carries one, tracking_error. Doubles print round-trip exact.
std::string trajectory_csv(const ArrayTrajectory& traj);

json load_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace synckit::io
