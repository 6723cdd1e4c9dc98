#pragma once

#include <optional>
#include <span>

#include "vnet/request.hpp"
#include "vnet/steiner.hpp"

namespace vnet {

// Duration-aggregated prices: for each resource, the sum of the per-slot
// dual prices over the request's active slots. What the oracles minimize
// against.
struct EffectivePrices {
  std::vector<double> edge;  // per edge index
  std::vector<double> node;  // per node index

  static EffectivePrices zero(const SubstrateNetwork& net);
};

struct OracleResult {
  Embedding embedding;
  double gamma = 0;  // price-cost of the embedding under the supplied prices
  double rho = 1;    // worst-case approximation factor of the oracle used
};

enum class OracleReject { Disconnected, NoFeasibleTree, Infeasible };

std::string to_string(OracleReject r);

struct OracleOutcome {
  std::optional<OracleResult> result;       // nullopt -> reject (empty Delta_j)
  OracleReject reject = OracleReject::Infeasible;
  bool floor_reroute_used = false;          // customer-pipe floor diagnostics

  static OracleOutcome rejected(OracleReject r) { return {std::nullopt, r, false}; }
  static OracleOutcome ok(OracleResult r) { return {std::move(r), OracleReject::Infeasible, false}; }
};

// Steiner construction backing the aggregate-ingress tree oracle.
enum class TreeOracleMode { Approx2, Exact };

struct OracleConfig {
  TreeOracleMode tree_mode = TreeOracleMode::Approx2;
  double min_load_floor = 1.0;
  int hose_edge_budget = 12;   // exhaustive hose oracle cap
  int exact_node_budget = 16;  // edge cap for exact node-weighted trees
};

// Aggregate-ingress requests routed as trees (single-path requests coincide
// with tree routing in this model): prune edges below the ingress amount
// (and nodes below the packet rate), then build a min-price Steiner tree.
// Reserves the full ingress on every tree edge.
OracleOutcome oracle_aggregate_tree(const SubstrateNetwork& net,
                                    std::span<const double> edge_capacity,
                                    std::span<const double> node_capacity,
                                    const EffectivePrices& prices,
                                    const VNetRequest& req,
                                    const OracleConfig& cfg);

// Hose requests with tree routing: exhaustive minimum over all feasible
// Steiner trees (exact, non-polynomial; small substrates only).
OracleOutcome oracle_hose_tree_exact(const SubstrateNetwork& net,
                                     std::span<const double> edge_capacity,
                                     std::span<const double> node_capacity,
                                     const EffectivePrices& prices,
                                     const VNetRequest& req,
                                     const OracleConfig& cfg);

// Bandwidth that must be reserved on tree edge `e`: the worst allowed
// traffic across the terminal cut induced by deleting `e` from the tree,
//   min(sum_A out, sum_B in) + min(sum_A in, sum_B out).
double hose_edge_reservation(const SubstrateNetwork& net,
                             const std::vector<int>& tree_edges, int e,
                             const VNetRequest& req);

// Customer-pipe requests with multipath routing: min-cost multicommodity
// flow by LP. Per-edge totals below the configured floor are forbidden and
// the flow re-solved once; a second failure rejects.
OracleOutcome oracle_customer_pipe_mcf(const SubstrateNetwork& net,
                                       std::span<const double> edge_capacity,
                                       const EffectivePrices& prices,
                                       const VNetRequest& req,
                                       const OracleConfig& cfg);

// X-cost of a column under duration-aggregated prices.
double column_price(const Embedding& emb, const EffectivePrices& prices);

// Routes a request to its oracle; nullopt when the (traffic, routing) pair
// has no supported oracle.
std::optional<OracleOutcome> dispatch_oracle(const SubstrateNetwork& net,
                                             std::span<const double> edge_capacity,
                                             std::span<const double> node_capacity,
                                             const EffectivePrices& prices,
                                             const VNetRequest& req,
                                             const OracleConfig& cfg);

}  // namespace vnet
