#pragma once

#include <span>
#include <vector>

#include "vnet/substrate.hpp"

namespace vnet {

struct SteinerTree {
  std::vector<int> edges;  // substrate edge indices, sorted
  std::vector<int> nodes;  // all endpoints, sorted
  double edge_cost = 0;    // under the weights it was built with
  double node_cost = 0;    // 0 for edge-weighted constructions

  double total_cost() const { return edge_cost + node_cost; }
  bool contains_node(int v) const;
};

// Classical metric-closure construction: closure MST, path expansion, MST of
// the expansion, leaf pruning. Cost at most twice the optimal Steiner tree.
// Edges with weight kUnbounded are unusable. Throws DisconnectedError.
SteinerTree mst_steiner_2approx(const SubstrateNetwork& net,
                                std::span<const double> edge_weight,
                                const std::vector<int>& terminals);

// Dreyfus-Wagner dynamic program; exact for small terminal counts
// (throws BudgetError above `max_terminals`).
SteinerTree steiner_exact(const SubstrateNetwork& net,
                          std::span<const double> edge_weight,
                          const std::vector<int>& terminals,
                          int max_terminals = 12);

// Component-merging greedy for combined edge + node costs: repeatedly picks
// the center whose cheapest connections to m >= 2 components minimize
// cost / m, then merges them. Cost within 2 ln k of the node-weighted
// optimum. The reported node_cost covers every tree node, terminals
// included. kUnbounded removes an edge/node.
SteinerTree node_weighted_steiner_greedy(const SubstrateNetwork& net,
                                         std::span<const double> edge_cost,
                                         std::span<const double> node_cost,
                                         const std::vector<int>& terminals);

// Every terminal-spanning tree whose leaves are all terminals, enumerated
// over edge subsets in ascending bitmask order. Throws BudgetError when the
// substrate has more than `edge_budget` edges. Costs are left zero.
std::vector<SteinerTree> enumerate_steiner_trees(const SubstrateNetwork& net,
                                                 const std::vector<int>& terminals,
                                                 int edge_budget);

// Cost helpers.
double tree_edge_cost(const SteinerTree& tree, std::span<const double> edge_weight);
double tree_node_cost(const SteinerTree& tree, std::span<const double> node_cost);

}  // namespace vnet
