#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dpa/errors.hpp"
#include "dpa/params.hpp"
#include "dpa/rng.hpp"

namespace dpa {

using NodeId = std::uint32_t;

/// Growing directed multigraph. Edges are stored as two flat endpoint lists so
/// that "target of a uniformly random edge" is a single index draw.
struct DirectedGraph {
  std::vector<std::uint64_t> in_degree;
  std::vector<std::uint64_t> out_degree;
  std::vector<NodeId> edge_sources;
  std::vector<NodeId> edge_targets;

  std::uint64_t n_edges() const { return edge_sources.size(); }
  std::uint64_t n_nodes() const { return in_degree.size(); }

  NodeId add_node() {
    in_degree.push_back(0);
    out_degree.push_back(0);
    return static_cast<NodeId>(in_degree.size() - 1);
  }

  void add_edge(NodeId source, NodeId target) {
    edge_sources.push_back(source);
    edge_targets.push_back(target);
    ++out_degree[source];
    ++in_degree[target];
  }
};

/// Initial graph G(n0): node count plus an edge list over ids [0, n_nodes).
struct InitialGraph {
  std::uint64_t n_nodes = 2;
  std::vector<std::pair<NodeId, NodeId>> edges = {{0, 1}, {1, 0}};

  /// Two nodes joined by edges 0 -> 1 and 1 -> 0.
  static InitialGraph two_cycle() { return {}; }
};

struct SimConfig {
  std::uint64_t target_edges = 0;
  std::uint64_t seed = 0;
  InitialGraph initial = InitialGraph::two_cycle();
};

inline DirectedGraph build_initial(const InitialGraph& init) {
  if (init.n_nodes == 0) throw ParameterError("initial graph must have at least one node");
  if (init.n_nodes > std::uint64_t{0xFFFFFFFF}) throw ParameterError("initial graph too large");
  DirectedGraph g;
  for (std::uint64_t k = 0; k < init.n_nodes; ++k) g.add_node();
  for (const auto& [s, t] : init.edges) {
    if (s >= init.n_nodes || t >= init.n_nodes) {
      throw ParameterError("initial edge (" + std::to_string(s) + ", " + std::to_string(t) +
                           ") references a node outside [0, " + std::to_string(init.n_nodes) + ")");
    }
    g.add_edge(s, t);
  }
  return g;
}

/// Node chosen with probability (D_in(w) + delta_in) / (n + delta_in * N).
///
/// Exact two-part mixture: with probability n / (n + delta_in * N) the target
/// of a uniform edge (in-degree proportional), otherwise a uniform node.
template <class G>
NodeId proportional_target(const DirectedGraph& graph, double delta_in, G& rng) {
  const auto n = static_cast<double>(graph.n_edges());
  const auto nodes = static_cast<double>(graph.n_nodes());
  if (graph.n_edges() > 0 && uniform01(rng) * (n + delta_in * nodes) < n) {
    return graph.edge_targets[uniform_index(rng, graph.n_edges())];
  }
  return static_cast<NodeId>(uniform_index(rng, graph.n_nodes()));
}

/// Out-degree analogue of proportional_target.
template <class G>
NodeId proportional_source(const DirectedGraph& graph, double delta_out, G& rng) {
  const auto n = static_cast<double>(graph.n_edges());
  const auto nodes = static_cast<double>(graph.n_nodes());
  if (graph.n_edges() > 0 && uniform01(rng) * (n + delta_out * nodes) < n) {
    return graph.edge_sources[uniform_index(rng, graph.n_edges())];
  }
  return static_cast<NodeId>(uniform_index(rng, graph.n_nodes()));
}

enum class Step { alpha, beta, gamma };

/// Adds one edge to `graph` by one of the three growth rules.
template <class G>
Step grow_step(DirectedGraph& graph, const ModelParams& p, G& rng) {
  const double u = uniform01(rng);
  if (u < p.alpha) {
    const NodeId w = proportional_target(graph, p.delta_in, rng);
    const NodeId v = graph.add_node();
    graph.add_edge(v, w);
    return Step::alpha;
  }
  if (u < p.alpha + p.beta || p.gamma == 0.0) {
    // both endpoints drawn from G(n-1); v == w gives a self-loop
    const NodeId v = proportional_source(graph, p.delta_out, rng);
    const NodeId w = proportional_target(graph, p.delta_in, rng);
    graph.add_edge(v, w);
    return Step::beta;
  }
  const NodeId v = proportional_source(graph, p.delta_out, rng);
  const NodeId w = graph.add_node();
  graph.add_edge(v, w);
  return Step::gamma;
}

inline void check_sim_config(const ModelParams& p, const SimConfig& cfg) {
  const auto n0 = static_cast<std::uint64_t>(cfg.initial.edges.size());
  if (cfg.target_edges <= n0) {
    throw ParameterError("target_edges (" + std::to_string(cfg.target_edges) +
                         ") must exceed the initial edge count (" + std::to_string(n0) + ")");
  }
  if ((p.delta_in == 0.0 || p.delta_out == 0.0) && n0 <= 1) {
    throw ParameterError("delta_in = 0 or delta_out = 0 requires an initial graph with more than one edge");
  }
  // The alpha/gamma steps need a node to attach to even when n0 = 0 and delta > 0.
  if (cfg.initial.n_nodes == 0) throw ParameterError("initial graph must have at least one node");
}

/// Grows G(target_edges) from the initial graph. Deterministic given the seed.
inline DirectedGraph grow(const ModelParams& params, const SimConfig& cfg) {
  check_sim_config(params, cfg);
  DirectedGraph g = build_initial(cfg.initial);
  g.in_degree.reserve(cfg.target_edges + cfg.initial.n_nodes);
  g.out_degree.reserve(cfg.target_edges + cfg.initial.n_nodes);
  g.edge_sources.reserve(cfg.target_edges);
  g.edge_targets.reserve(cfg.target_edges);
  Rng rng(cfg.seed);
  while (g.n_edges() < cfg.target_edges) grow_step(g, params, rng);
  return g;
}

using DegreePair = std::pair<std::uint64_t, std::uint64_t>;  // (in, out)
using JointCounts = std::map<DegreePair, std::uint64_t>;

/// N_ij: number of nodes with in-degree i and out-degree j.
inline JointCounts joint_degree_counts(const DirectedGraph& g) {
  JointCounts counts;
  for (std::uint64_t v = 0; v < g.n_nodes(); ++v) ++counts[{g.in_degree[v], g.out_degree[v]}];
  return counts;
}

}  // namespace dpa
