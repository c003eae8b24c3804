#pragma once

// JSON run configuration. Model parameters sit at the top level; each
// subcommand has an optional block of its own. Unknown keys are rejected and
// every error names the offending key path.
//
//   {
//     "alpha": 0.5, "beta": 0.5, "gamma": 0.0, "delta_in": 1, "delta_out": 1,
//     "seed": 42,
//     "out": "result.csv",
//     "simulate": {"edges": 2000000, "edge_list": "",
//                  "initial": {"nodes": 2, "edges": [[0, 1], [1, 0]]}},
//     "recurse":  {"imax": 500, "jmax": 500, "marginal": "", "order": "row_major"},
//     "density":  {"kind": "ratio", "points": 512, "lo": 0, "hi": 10},
//     "sample":   {"n": 100000},
//     "compare":  {"strategy": "recurse", "kind": "ratio", "quantile": 0.9995, "bins": 64,
//                  "edges": 2000000, "n": 20000000, "imax": 2000, "jmax": 2000}
//   }

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpa/densities.hpp"
#include "dpa/errors.hpp"
#include "dpa/graph.hpp"
#include "dpa/params.hpp"
#include "dpa/recursion.hpp"

namespace dpa {

struct SimulateBlock {
  std::uint64_t edges = 200000;
  std::string edge_list;  // empty: no edge list written
  InitialGraph initial = InitialGraph::two_cycle();
};

struct RecurseBlock {
  std::size_t imax = 500;  // number of rows, i = 0..imax-1
  std::size_t jmax = 500;
  std::string marginal;  // "", "in" or "out"
  Traversal order = Traversal::row_major;
};

struct DensityBlock {
  DensityKind kind = DensityKind::ratio;
  std::size_t points = 512;
  std::optional<double> lo;
  std::optional<double> hi;
};

struct SampleBlock {
  std::uint64_t n = 100000;
};

struct CompareBlock {
  std::string strategy = "recurse";  // sim | recurse | sampler
  std::string kind = "ratio";        // ratio | angular
  double quantile = 0.9995;
  std::size_t bins = 64;
  std::uint64_t edges = 0;  // 0: about 10^6 nodes
  std::uint64_t n = 20000000;
  std::size_t imax = 0;  // 0: chosen from the kind
  std::size_t jmax = 0;
};

struct RunConfig {
  ModelParams params;
  std::vector<std::string> warnings;
  std::uint64_t seed = 1;
  std::string out;
  SimulateBlock simulate;
  RecurseBlock recurse;
  DensityBlock density;
  SampleBlock sample;
  CompareBlock compare;
};

namespace detail {

using nlohmann::json;

inline std::string key_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

inline void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError("unknown key \"" + key_path(path, k) + "\"");
  }
}

inline const json& require_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError("\"" + (path.empty() ? std::string("<root>") : path) + "\" must be an object");
  return v;
}

inline double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError("\"" + path + "\" must be a number");
  return v.get<double>();
}

inline std::uint64_t get_count(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) throw ConfigError("\"" + path + "\" must be nonnegative");
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d < 1.8e19 && d == std::floor(d)) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError("\"" + path + "\" must be a nonnegative integer");
}

inline std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError("\"" + path + "\" must be a string");
  return v.get<std::string>();
}

inline std::string one_of(const json& v, const std::string& path, std::initializer_list<const char*> choices) {
  const std::string s = get_string(v, path);
  std::string list;
  for (const char* c : choices) {
    if (s == c) return s;
    list += list.empty() ? c : std::string(", ") + c;
  }
  throw ConfigError("\"" + path + "\" must be one of " + list + ", got \"" + s + "\"");
}

inline DensityKind parse_density_kind(const std::string& s) {
  if (s == "ratio") return DensityKind::ratio;
  if (s == "ratio_arctan") return DensityKind::ratio_arctan;
  if (s == "angular") return DensityKind::angular;
  return DensityKind::tail2d_slice;
}

inline void parse_simulate(const json& b, SimulateBlock& s) {
  const std::string path = "simulate";
  require_object(b, path);
  reject_unknown(b, path, {"edges", "edge_list", "initial"});
  if (b.contains("edges")) s.edges = get_count(b["edges"], path + ".edges");
  if (b.contains("edge_list")) s.edge_list = get_string(b["edge_list"], path + ".edge_list");
  if (b.contains("initial")) {
    const std::string ip = path + ".initial";
    const json& init = require_object(b["initial"], ip);
    reject_unknown(init, ip, {"nodes", "edges"});
    if (!init.contains("nodes")) throw ConfigError("missing key \"" + ip + ".nodes\"");
    if (!init.contains("edges")) throw ConfigError("missing key \"" + ip + ".edges\"");
    s.initial.n_nodes = get_count(init["nodes"], ip + ".nodes");
    if (s.initial.n_nodes == 0 || s.initial.n_nodes > 0xFFFFFFFFull) {
      throw ConfigError("\"" + ip + ".nodes\" must lie in [1, 2^32)");
    }
    if (!init["edges"].is_array()) throw ConfigError("\"" + ip + ".edges\" must be an array of [source, target]");
    s.initial.edges.clear();
    std::size_t k = 0;
    for (const auto& e : init["edges"]) {
      const std::string ep = ip + ".edges[" + std::to_string(k++) + "]";
      if (!e.is_array() || e.size() != 2) throw ConfigError("\"" + ep + "\" must be a [source, target] pair");
      const auto src = get_count(e[0], ep + "[0]");
      const auto dst = get_count(e[1], ep + "[1]");
      if (src >= s.initial.n_nodes || dst >= s.initial.n_nodes) {
        throw ConfigError("\"" + ep + "\" references a node outside [0, nodes)");
      }
      s.initial.edges.emplace_back(static_cast<NodeId>(src), static_cast<NodeId>(dst));
    }
  }
}

inline void parse_recurse(const json& b, RecurseBlock& r) {
  const std::string path = "recurse";
  require_object(b, path);
  reject_unknown(b, path, {"imax", "jmax", "marginal", "order"});
  if (b.contains("imax")) r.imax = get_count(b["imax"], path + ".imax");
  if (b.contains("jmax")) r.jmax = get_count(b["jmax"], path + ".jmax");
  if (r.imax < 3) throw ConfigError("\"recurse.imax\" must be at least 3");
  if (r.jmax < 3) throw ConfigError("\"recurse.jmax\" must be at least 3");
  if (b.contains("marginal")) r.marginal = one_of(b["marginal"], path + ".marginal", {"", "in", "out"});
  if (b.contains("order")) {
    r.order = one_of(b["order"], path + ".order", {"row_major", "anti_diagonal"}) == "row_major"
                  ? Traversal::row_major
                  : Traversal::anti_diagonal;
  }
}

inline void parse_density(const json& b, DensityBlock& d) {
  const std::string path = "density";
  require_object(b, path);
  reject_unknown(b, path, {"kind", "points", "lo", "hi"});
  if (b.contains("kind")) {
    d.kind = parse_density_kind(one_of(b["kind"], path + ".kind", {"ratio", "ratio_arctan", "angular", "slice"}));
  }
  if (b.contains("points")) d.points = get_count(b["points"], path + ".points");
  if (d.points < 2) throw ConfigError("\"density.points\" must be at least 2");
  if (b.contains("lo")) d.lo = get_number(b["lo"], path + ".lo");
  if (b.contains("hi")) d.hi = get_number(b["hi"], path + ".hi");
  if (d.lo && d.hi && !(*d.hi > *d.lo)) throw ConfigError("\"density.hi\" must exceed \"density.lo\"");
}

inline void parse_compare(const json& b, CompareBlock& c) {
  const std::string path = "compare";
  require_object(b, path);
  reject_unknown(b, path, {"strategy", "kind", "quantile", "bins", "edges", "n", "imax", "jmax"});
  if (b.contains("strategy")) c.strategy = one_of(b["strategy"], path + ".strategy", {"sim", "recurse", "sampler"});
  if (b.contains("kind")) c.kind = one_of(b["kind"], path + ".kind", {"ratio", "angular"});
  if (b.contains("quantile")) c.quantile = get_number(b["quantile"], path + ".quantile");
  if (!(c.quantile > 0.0 && c.quantile < 1.0)) throw ConfigError("\"compare.quantile\" must lie in (0, 1)");
  if (b.contains("bins")) c.bins = get_count(b["bins"], path + ".bins");
  if (c.bins == 0) throw ConfigError("\"compare.bins\" must be positive");
  if (b.contains("edges")) c.edges = get_count(b["edges"], path + ".edges");
  if (b.contains("n")) c.n = get_count(b["n"], path + ".n");
  if (c.n == 0) throw ConfigError("\"compare.n\" must be positive");
  if (b.contains("imax")) c.imax = get_count(b["imax"], path + ".imax");
  if (b.contains("jmax")) c.jmax = get_count(b["jmax"], path + ".jmax");
}

}  // namespace detail

/// Parses and validates a configuration held in a string.
inline RunConfig parse_config_text(const std::string& text) {
  using detail::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  detail::require_object(root, "");
  detail::reject_unknown(root, "", {"alpha", "beta", "gamma", "delta_in", "delta_out", "seed", "out", "simulate",
                                    "recurse", "density", "sample", "compare"});
  RunConfig cfg;
  ModelParams raw;
  const struct {
    const char* key;
    double* field;
  } required[] = {{"alpha", &raw.alpha},
                  {"beta", &raw.beta},
                  {"gamma", &raw.gamma},
                  {"delta_in", &raw.delta_in},
                  {"delta_out", &raw.delta_out}};
  for (const auto& r : required) {
    if (!root.contains(r.key)) throw ConfigError(std::string("missing key \"") + r.key + "\"");
    *r.field = detail::get_number(root[r.key], r.key);
  }
  try {
    cfg.params = validate(raw, &cfg.warnings);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }

  if (root.contains("seed")) cfg.seed = detail::get_count(root["seed"], "seed");
  if (root.contains("out")) cfg.out = detail::get_string(root["out"], "out");
  if (root.contains("simulate")) detail::parse_simulate(root["simulate"], cfg.simulate);
  if (root.contains("recurse")) detail::parse_recurse(root["recurse"], cfg.recurse);
  if (root.contains("density")) detail::parse_density(root["density"], cfg.density);
  if (root.contains("sample")) {
    const json& b = detail::require_object(root["sample"], "sample");
    detail::reject_unknown(b, "sample", {"n"});
    if (b.contains("n")) cfg.sample.n = detail::get_count(b["n"], "sample.n");
    if (cfg.sample.n == 0) throw ConfigError("\"sample.n\" must be positive");
  }
  if (root.contains("compare")) detail::parse_compare(root["compare"], cfg.compare);
  return cfg;
}

/// Reads and validates a configuration file.
inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace dpa
