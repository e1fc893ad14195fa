#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "tpgm/graph.hpp"
#include "tpgm/matcher.hpp"

namespace tpgm {

/// Graph files:
///   {"directed": bool, "nodes": [{"attr": [f64] | [[f64]]}], "edges": [{"src", "dst", "attr": [f64]}]}
/// Undirected graphs list each edge once; either orientation is accepted.
AttributedGraph parse_graph_json(std::string_view text);
AttributedGraph read_graph_file(const std::string& path);

/// Inverse of parse_graph_json. Numbers are written in shortest round-trip
/// form, so parse(serialize(g)) == g.
std::string graph_to_json(const AttributedGraph& g);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

/// Recognized config keys, in documentation order.
const std::vector<std::string>& config_keys();

/// Applies a JSON object of config keys. Unknown keys and ill-typed values
/// are parse errors.
void apply_config_json(MatchConfig& cfg, std::string_view text);
void apply_config_file(MatchConfig& cfg, const std::string& path);

/// Applies one key from its textual form (as found in the environment or on
/// the command line).
void apply_config_value(MatchConfig& cfg, std::string_view key, std::string_view value);

using EnvLookup = std::function<const char*(const char*)>;

/// For every key, TPGMATCH_<KEY> (upper case) overrides the current value.
void apply_env_overrides(MatchConfig& cfg, const EnvLookup& lookup);
void apply_env_overrides(MatchConfig& cfg);

/// Range checks on the assembled config.
void validate(const MatchConfig& cfg);

/// {"assignment": [[i, j], ...], "x": [...], "y": [...], "objective_lp": v,
///  "objective_qap": v, "timings": {...}}. Timings are written only when asked
/// for, otherwise null, which keeps the output byte-identical across runs.
std::string result_to_json(const MatchResult& r, bool timings);

}  // namespace tpgm
