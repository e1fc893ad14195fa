#include "tpgm/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tpgm/error.hpp"

namespace tpgm {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Vector parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::parse, where + ": expected an array of numbers");
  Vector v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) fail(ErrorKind::parse, where + ": expected an array of numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

NodeAttr parse_node_attr(const json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorKind::parse, where + ": attr must be an array");
  if (!j.empty() && j.front().is_array()) {
    PointSet s;
    for (std::size_t i = 0; i < j.size(); ++i) s.push_back(parse_vector(j[i], where + "[" + std::to_string(i) + "]"));
    return s;
  }
  return parse_vector(j, where);
}

std::size_t parse_index(const json& j, const std::string& where) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0))
    fail(ErrorKind::parse, where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      fail(ErrorKind::parse, where + ": unknown key '" + k + "'");
  }
}

json node_attr_json(const NodeAttr& a) {
  if (const auto* v = std::get_if<Vector>(&a)) return json(*v);
  return json(std::get<PointSet>(a));
}

enum class KeyType { string, number, count, boolean };

struct KeySpec {
  const char* name;
  KeyType type;
};

constexpr KeySpec kKeys[] = {
    {"node_kernel", KeyType::string},
    {"edge_kernel", KeyType::string},
    {"bandwidth", KeyType::number},
    {"model", KeyType::string},
    {"discretize", KeyType::boolean},
    {"solver_rtol", KeyType::number},
    {"solver_max_iter_factor", KeyType::number},
    {"dense_threshold", KeyType::count},
    {"lp_max_pivots", KeyType::count},
    {"lp_feasibility_tol", KeyType::number},
    {"lp_optimality_tol", KeyType::number},
    {"max_tpg_nodes", KeyType::count},
    {"prune_eps", KeyType::number},
};

const KeySpec& find_key(std::string_view key) {
  for (const auto& k : kKeys)
    if (key == k.name) return k;
  fail(ErrorKind::parse, "unknown config key '" + std::string(key) + "'");
}

// Typed value for one key; exactly one member is meaningful.
struct KeyValue {
  std::string s;
  double d = 0.0;
  std::size_t n = 0;
  bool b = false;
};

void assign(MatchConfig& cfg, std::string_view key, const KeyValue& v) {
  if (key == "node_kernel") cfg.affinity.node_kernel = parse_kernel(v.s);
  else if (key == "edge_kernel") cfg.affinity.edge_kernel = parse_kernel(v.s);
  else if (key == "bandwidth") cfg.affinity.bandwidth = v.d;
  else if (key == "model") cfg.model = parse_walk_model(v.s);
  else if (key == "discretize") cfg.discretize = v.b;
  else if (key == "solver_rtol") cfg.solver.rtol = v.d;
  else if (key == "solver_max_iter_factor") cfg.solver.max_iter_factor = v.d;
  else if (key == "dense_threshold") cfg.solver.dense_threshold = v.n;
  else if (key == "lp_max_pivots") cfg.lp.max_pivots = v.n;
  else if (key == "lp_feasibility_tol") cfg.lp.feasibility_tol = v.d;
  else if (key == "lp_optimality_tol") cfg.lp.optimality_tol = v.d;
  else if (key == "max_tpg_nodes") cfg.product.max_tpg_nodes = v.n;
  else if (key == "prune_eps") cfg.prune_eps = v.d;
}

// Kernel and model names arrive as invalid_argument from their parsers; in a
// config they are input errors.
void assign_as_parse(MatchConfig& cfg, std::string_view key, const KeyValue& v) {
  try {
    assign(cfg, key, v);
  } catch (const Error& e) {
    fail(ErrorKind::parse, "config key '" + std::string(key) + "': " + e.what());
  }
}

double parse_double(std::string_view text, std::string_view key) {
  double d = 0.0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, d);
  if (ec != std::errc() || p != end || !std::isfinite(d))
    fail(ErrorKind::parse, "config key '" + std::string(key) + "': '" + std::string(text) + "' is not a number");
  return d;
}

std::size_t parse_count(std::string_view text, std::string_view key) {
  std::size_t n = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, n);
  if (ec != std::errc() || p != end || text.empty())
    fail(ErrorKind::parse,
         "config key '" + std::string(key) + "': '" + std::string(text) + "' is not a non-negative integer");
  return n;
}

bool parse_bool(std::string_view text, std::string_view key) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  fail(ErrorKind::parse, "config key '" + std::string(key) + "': '" + std::string(text) + "' is not a boolean");
}

}  // namespace

AttributedGraph parse_graph_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, std::string("graph: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::parse, "graph: top level must be an object");
  check_keys(doc, {"directed", "nodes", "edges"}, "graph");

  bool directed = true;
  if (doc.contains("directed")) {
    if (!doc["directed"].is_boolean()) fail(ErrorKind::parse, "graph: 'directed' must be a boolean");
    directed = doc["directed"].get<bool>();
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) fail(ErrorKind::parse, "graph: 'nodes' array missing");

  std::vector<NodeAttr> nodes;
  const auto& jn = doc["nodes"];
  for (std::size_t v = 0; v < jn.size(); ++v) {
    const std::string where = "graph: nodes[" + std::to_string(v) + "]";
    if (!jn[v].is_object()) fail(ErrorKind::parse, where + " must be an object");
    check_keys(jn[v], {"attr"}, where);
    nodes.push_back(jn[v].contains("attr") ? parse_node_attr(jn[v]["attr"], where + ".attr") : NodeAttr(Vector{}));
  }

  std::vector<Arc> arcs;
  if (doc.contains("edges")) {
    const auto& je = doc["edges"];
    if (!je.is_array()) fail(ErrorKind::parse, "graph: 'edges' must be an array");
    for (std::size_t e = 0; e < je.size(); ++e) {
      const std::string where = "graph: edges[" + std::to_string(e) + "]";
      if (!je[e].is_object() || !je[e].contains("src") || !je[e].contains("dst"))
        fail(ErrorKind::parse, where + " needs 'src' and 'dst'");
      check_keys(je[e], {"src", "dst", "attr"}, where);
      Arc a;
      a.src = parse_index(je[e]["src"], where + ".src");
      a.dst = parse_index(je[e]["dst"], where + ".dst");
      if (je[e].contains("attr")) a.attr = parse_vector(je[e]["attr"], where + ".attr");
      arcs.push_back(std::move(a));
    }
  }

  try {
    return AttributedGraph(std::move(nodes), std::move(arcs), directed);
  } catch (const Error& e) {
    fail(ErrorKind::parse, std::string("graph: ") + e.what());
  }
}

AttributedGraph read_graph_file(const std::string& path) {
  try {
    return parse_graph_json(read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what(), e.stage());
  }
}

std::string graph_to_json(const AttributedGraph& g) {
  ordered_json doc;
  doc["directed"] = g.directed();
  doc["nodes"] = ordered_json::array();
  for (const auto& a : g.nodes()) doc["nodes"].push_back({{"attr", node_attr_json(a)}});
  doc["edges"] = ordered_json::array();
  for (const auto& a : g.edge_list()) doc["edges"].push_back({{"src", a.src}, {"dst", a.dst}, {"attr", a.attr}});
  return doc.dump(1) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::invalid_argument, "cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::invalid_argument, "write to '" + path + "' failed");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& k : kKeys) out.emplace_back(k.name);
    return out;
  }();
  return keys;
}

void apply_config_json(MatchConfig& cfg, std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::parse, "config: top level must be an object");
  for (const auto& [key, val] : doc.items()) {
    const auto& spec = find_key(key);
    KeyValue v;
    const std::string bad = "config key '" + key + "' has the wrong type";
    switch (spec.type) {
      case KeyType::string:
        if (!val.is_string()) fail(ErrorKind::parse, bad);
        v.s = val.get<std::string>();
        break;
      case KeyType::number:
        if (!val.is_number()) fail(ErrorKind::parse, bad);
        v.d = val.get<double>();
        break;
      case KeyType::count:
        if (!val.is_number_unsigned()) fail(ErrorKind::parse, bad);
        v.n = val.get<std::size_t>();
        break;
      case KeyType::boolean:
        if (!val.is_boolean()) fail(ErrorKind::parse, bad);
        v.b = val.get<bool>();
        break;
    }
    assign_as_parse(cfg, key, v);
  }
}

void apply_config_file(MatchConfig& cfg, const std::string& path) {
  try {
    apply_config_json(cfg, read_text_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what(), e.stage());
  }
}

void apply_config_value(MatchConfig& cfg, std::string_view key, std::string_view value) {
  const auto& spec = find_key(key);
  KeyValue v;
  switch (spec.type) {
    case KeyType::string: v.s = std::string(value); break;
    case KeyType::number: v.d = parse_double(value, key); break;
    case KeyType::count: v.n = parse_count(value, key); break;
    case KeyType::boolean: v.b = parse_bool(value, key); break;
  }
  assign_as_parse(cfg, key, v);
}

void apply_env_overrides(MatchConfig& cfg, const EnvLookup& lookup) {
  for (const auto& k : kKeys) {
    std::string var = "TPGMATCH_";
    for (const char* c = k.name; *c; ++c) var += static_cast<char>(std::toupper(static_cast<unsigned char>(*c)));
    const char* value = lookup(var.c_str());
    if (!value) continue;
    try {
      apply_config_value(cfg, k.name, value);
    } catch (const Error& e) {
      fail(ErrorKind::parse, var + ": " + e.what());
    }
  }
}

void apply_env_overrides(MatchConfig& cfg) {
  apply_env_overrides(cfg, [](const char* name) -> const char* { return std::getenv(name); });
}

void validate(const MatchConfig& cfg) {
  try {
    cfg.affinity.validate();
  } catch (const Error& e) {
    fail(ErrorKind::parse, std::string("config: ") + e.what());
  }
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::parse, std::string("config: ") + name + " must be positive");
  };
  positive(cfg.solver.rtol, "solver_rtol");
  positive(cfg.solver.max_iter_factor, "solver_max_iter_factor");
  positive(cfg.lp.feasibility_tol, "lp_feasibility_tol");
  positive(cfg.lp.optimality_tol, "lp_optimality_tol");
  if (cfg.product.max_tpg_nodes == 0) fail(ErrorKind::parse, "config: max_tpg_nodes must be positive");
  if (!(cfg.prune_eps >= 0.0) || !std::isfinite(cfg.prune_eps))
    fail(ErrorKind::parse, "config: prune_eps must be >= 0");
}

std::string result_to_json(const MatchResult& r, bool timings) {
  ordered_json doc;
  if (r.assignment) {
    doc["assignment"] = ordered_json::array();
    for (const auto& [i, j] : r.assignment->pairs()) doc["assignment"].push_back({i, j});
  } else {
    doc["assignment"] = nullptr;
  }
  doc["x"] = r.x;
  doc["y"] = r.y;
  doc["objective_lp"] = r.objective_lp;
  doc["objective_qap"] = r.objective_qap ? ordered_json(*r.objective_qap) : ordered_json(nullptr);
  if (timings) {
    const auto& t = r.timings;
    doc["timings"] = {{"product_graph_ms", t.product_graph_ms}, {"context_similarity_ms", t.context_ms},
                      {"lp_build_ms", t.lp_build_ms},           {"lp_solve_ms", t.lp_solve_ms},
                      {"discretize_ms", t.discretize_ms},       {"total_ms", t.total_ms}};
  } else {
    doc["timings"] = nullptr;
  }
  return doc.dump(1) + "\n";
}

}  // namespace tpgm
