#pragma once

#include <utility>
#include <vector>

#include "vnet/engine.hpp"
#include "vnet/steiner.hpp"

namespace vnet {

struct EnumeratedColumns {
  std::vector<Embedding> embeddings;
  bool truncated = false;  // budget hit; the list is a subset
};

// Explicit Delta_j within an enumeration budget. Tree-routed models list all
// feasible Steiner trees with their model reservations; customer-pipe
// multipath lists single-path-per-commodity routings as audit columns (the
// full region is a polytope, handled implicitly by offline_fractional_opt).
// Unsupported (traffic, routing) pairs yield an empty list.
EnumeratedColumns enumerate_embeddings(const SubstrateNetwork& net, const VNetRequest& req,
                                       int edge_budget = 12);

struct OfflineOpt {
  double value = 0;
  bool truncated = false;  // value is then only a certified lower bound
};

// Optimal offline fractional packing benefit over the time-expanded rows,
// against the network's original capacities.
OfflineOpt offline_fractional_opt(const SubstrateNetwork& net,
                                  const std::vector<VNetRequest>& requests,
                                  int edge_budget = 12);

// Exact optima over exhaustively enumerated trees; the reference the
// approximation oracles are tested against. Edges/nodes with kUnbounded
// cost are unusable.
std::pair<SteinerTree, double> brute_force_steiner(const SubstrateNetwork& net,
                                                   std::span<const double> edge_weight,
                                                   const std::vector<int>& terminals,
                                                   int edge_budget = 14);
std::pair<SteinerTree, double> brute_force_node_weighted(const SubstrateNetwork& net,
                                                         std::span<const double> edge_cost,
                                                         std::span<const double> node_cost,
                                                         const std::vector<int>& terminals,
                                                         int edge_budget = 14);

// Covering feasibility of a finished plain-mode run: the largest value of
// b_j - z_j - X-cost(col) over every request and every column of its
// enumerated Delta_j (multipath requests are minimized exactly by LP).
// <= 0 when the final covering solution is feasible.
double max_covering_violation(const SubstrateNetwork& net,
                              const std::vector<VNetRequest>& requests,
                              const PriceState& state, int edge_budget = 12);

}  // namespace vnet
