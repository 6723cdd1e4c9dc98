#pragma once

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vnet/errors.hpp"

namespace vnet {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct SubstrateEdge {
  int u = -1;
  int v = -1;
  double capacity = 0.0;

  int other(int node) const { return node == u ? v : u; }
};

// The physical network: an undirected capacitated graph with per-edge
// bandwidth capacities and optional per-node packet-rate capacities
// (kUnbounded when a node is not a constrained resource).
//
// Immutable once loaded/validated; shared read-only across runs.
class SubstrateNetwork {
 public:
  int add_node(const std::string& id, double capacity = kUnbounded);
  int add_edge(const std::string& u, const std::string& v, double capacity);

  // Checks all structural invariants: capacities >= 1 (finite node
  // capacities included), no self-loops, no parallel edges, edge endpoints
  // exist. Throws ValidationError.
  void validate() const;

  int node_count() const { return static_cast<int>(node_ids_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const std::string& node_id(int v) const { return node_ids_[v]; }
  double node_capacity(int v) const { return node_caps_[v]; }
  std::optional<int> node_index(const std::string& id) const;
  int require_node(const std::string& id) const;  // throws ValidationError

  const SubstrateEdge& edge(int e) const { return edges_[e]; }
  const std::vector<SubstrateEdge>& edges() const { return edges_; }
  std::optional<int> find_edge(int u, int v) const;
  const std::vector<int>& incident(int v) const { return incident_[v]; }

  std::vector<double> edge_capacities() const;
  std::vector<double> node_capacities() const { return node_caps_; }

  std::string edge_name(int e) const;  // "u-v", for reports

  // Rank of each node in lexicographic id order; the shared tie-break key
  // for deterministic path selection.
  std::vector<int> lex_ranks() const;

 private:
  std::vector<std::string> node_ids_;
  std::vector<double> node_caps_;
  std::map<std::string, int> index_;
  std::vector<SubstrateEdge> edges_;
  std::vector<std::vector<int>> incident_;
};

// Instance file I/O (JSON: {"nodes":[{"id","capacity"?}], "edges":[{"u","v","capacity"}]}).
SubstrateNetwork load_substrate(const std::string& text);
SubstrateNetwork load_substrate_file(const std::string& path);
std::string serialize_substrate(const SubstrateNetwork& net);

// Plain edge-list reader: one "u v [capacity]" per line, '#' comments.
// Missing capacities default to 1 (the planted builder overwrites them).
SubstrateNetwork load_edge_list(const std::string& text);

// Tries JSON first, then falls back to the edge-list format.
SubstrateNetwork load_topology_file(const std::string& path);

// ---------------------------------------------------------------------------
// Shortest paths with deterministic tie-breaking.
//
// Paths of equal weight are ordered by the lexicographic sequence of node
// ids along them; the least such simple path wins. All routing in this
// project goes through here, which is what makes replays byte-identical.

struct PathInfo {
  double weight = kUnbounded;
  std::vector<int> nodes;  // source .. target; empty when unreachable
  std::vector<int> edges;
};

// Single-source shortest paths. `edge_weight[e] == kUnbounded` removes an
// edge; `node_enter_cost` (optional, may be empty) is added when a path
// arrives at a node (never charged at the source), kUnbounded removes the
// node. All weights/costs must be >= 0.
std::vector<PathInfo> lex_shortest_paths(const SubstrateNetwork& net,
                                         std::span<const double> edge_weight,
                                         std::span<const double> node_enter_cost,
                                         int source);

// Metric closure over a terminal set: pairwise minimum path weights plus the
// realizing substrate paths. Unreachable pairs carry weight kUnbounded.
class TerminalClosure {
 public:
  TerminalClosure(std::vector<int> terminals) : terminals_(std::move(terminals)) {}

  const std::vector<int>& terminals() const { return terminals_; }
  const PathInfo& between(int a, int b) const;  // substrate node indices
  void set(int a, int b, PathInfo info);

 private:
  std::vector<int> terminals_;
  std::map<std::pair<int, int>, PathInfo> paths_;
};

TerminalClosure shortest_path_closure(const SubstrateNetwork& net,
                                      std::span<const double> edge_weight,
                                      const std::vector<int>& terminals);

}  // namespace vnet
