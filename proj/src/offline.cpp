#include "vnet/offline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vnet/lp.hpp"
#include "vnet/oracle.hpp"

namespace vnet {

namespace {

constexpr double kEps = 1e-9;

// Simple s-t paths as edge sequences, DFS in ascending edge-index order.
void simple_paths(const SubstrateNetwork& net, int cur, int dst, std::vector<bool>& visited,
                  std::vector<int>& edge_stack, std::vector<std::vector<int>>& out,
                  size_t max_paths, bool* truncated) {
  if (cur == dst) {
    if (out.size() < max_paths) {
      out.push_back(edge_stack);
    } else {
      *truncated = true;
    }
    return;
  }
  for (int e : net.incident(cur)) {
    if (*truncated && out.size() >= max_paths) return;
    int nb = net.edge(e).other(cur);
    if (visited[nb]) continue;
    visited[nb] = true;
    edge_stack.push_back(e);
    simple_paths(net, nb, dst, visited, edge_stack, out, max_paths, truncated);
    edge_stack.pop_back();
    visited[nb] = false;
  }
}

struct Commodity {
  int src;
  int dst;
  double demand;
};

std::vector<Commodity> commodities_of(const VNetRequest& req) {
  std::vector<Commodity> out;
  const auto& cp = std::get<CustomerPipeTraffic>(req.traffic);
  for (const auto& [pair, d] : cp.demands) {
    if (d > 0) out.push_back({pair.first, pair.second, d});
  }
  return out;
}

}  // namespace

EnumeratedColumns enumerate_embeddings(const SubstrateNetwork& net, const VNetRequest& req,
                                       int edge_budget) {
  EnumeratedColumns out;
  const double pr = req.packet_rate;

  if (std::holds_alternative<CustomerPipeTraffic>(req.traffic)) {
    if (req.routing != RoutingModel::Multipath) return out;
    // Audit columns: one simple path per commodity, all combinations that
    // fit the capacities.
    auto commodities = commodities_of(req);
    constexpr size_t kMaxPathsPerCommodity = 64;
    constexpr size_t kMaxCombos = 4096;
    std::vector<std::vector<std::vector<int>>> paths(commodities.size());
    bool truncated = false;
    for (size_t c = 0; c < commodities.size(); ++c) {
      std::vector<bool> visited(net.node_count(), false);
      visited[commodities[c].src] = true;
      std::vector<int> stack;
      simple_paths(net, commodities[c].src, commodities[c].dst, visited, stack, paths[c],
                   kMaxPathsPerCommodity, &truncated);
      if (paths[c].empty()) return out;  // commodity unroutable: Delta_j empty
    }
    std::vector<size_t> pick(commodities.size(), 0);
    size_t combos = 0;
    for (;;) {
      if (++combos > kMaxCombos) {
        truncated = true;
        break;
      }
      Embedding emb;
      for (size_t c = 0; c < commodities.size(); ++c) {
        for (int e : paths[c][pick[c]]) emb.edge_reservation[e] += commodities[c].demand;
        emb.commodity_flows[{commodities[c].src, commodities[c].dst}] = {
            {paths[c][pick[c]], commodities[c].demand}};
      }
      bool feasible = true;
      for (const auto& [e, r] : emb.edge_reservation) {
        if (r > net.edge(e).capacity + kEps) {
          feasible = false;
          break;
        }
      }
      if (feasible) out.embeddings.push_back(std::move(emb));
      size_t c = 0;
      while (c < commodities.size() && ++pick[c] == paths[c].size()) pick[c++] = 0;
      if (c == commodities.size()) break;
    }
    out.truncated = truncated;
    return out;
  }

  if (std::holds_alternative<HoseTraffic>(req.traffic)) {
    if (req.routing != RoutingModel::Tree) return out;
    for (const auto& tree : enumerate_steiner_trees(net, req.terminals, edge_budget)) {
      Embedding emb;
      bool feasible = true;
      for (int e : tree.edges) {
        double u = hose_edge_reservation(net, tree.edges, e, req);
        if (u > net.edge(e).capacity + kEps) {
          feasible = false;
          break;
        }
        emb.edge_reservation[e] = u;
      }
      if (feasible && pr > 0) {
        for (int v : tree.nodes) {
          if (net.node_capacity(v) < pr - kEps) {
            feasible = false;
            break;
          }
          emb.node_usage[v] = pr;
        }
      }
      if (feasible) out.embeddings.push_back(std::move(emb));
    }
    return out;
  }

  // Aggregate ingress, tree or single-path routing.
  if (req.routing == RoutingModel::Multipath) return out;
  const double ingress = std::get<AggregateIngressTraffic>(req.traffic).ingress;
  for (const auto& tree : enumerate_steiner_trees(net, req.terminals, edge_budget)) {
    bool feasible = true;
    for (int e : tree.edges) feasible = feasible && ingress <= net.edge(e).capacity + kEps;
    if (pr > 0) {
      for (int v : tree.nodes) feasible = feasible && pr <= net.node_capacity(v) + kEps;
    }
    if (!feasible) continue;
    Embedding emb;
    for (int e : tree.edges) emb.edge_reservation[e] = ingress;
    if (pr > 0) {
      for (int v : tree.nodes) emb.node_usage[v] = pr;
    }
    out.embeddings.push_back(std::move(emb));
  }
  return out;
}

OfflineOpt offline_fractional_opt(const SubstrateNetwork& net,
                                  const std::vector<VNetRequest>& requests, int edge_budget) {
  OfflineOpt result;
  if (requests.empty()) return result;

  LinearProgram lp;
  lp.direction = Objective::Maximize;

  std::set<long long> slot_set;
  for (const auto& req : requests) slot_set.insert(req.duration.begin(), req.duration.end());
  std::vector<long long> slots(slot_set.begin(), slot_set.end());

  struct TreeBlock {
    const VNetRequest* req;
    std::vector<Embedding> cols;
    int first_var;
  };
  struct MpBlock {
    const VNetRequest* req;
    std::vector<Commodity> commodities;
    int y_var;
    int first_flow_var;  // per commodity, 2 vars per edge (u->v, v->u)
  };
  std::vector<TreeBlock> tree_blocks;
  std::vector<MpBlock> mp_blocks;

  const int m = net.edge_count();
  for (const auto& req : requests) {
    if (std::holds_alternative<CustomerPipeTraffic>(req.traffic) &&
        req.routing == RoutingModel::Multipath) {
      MpBlock block{&req, commodities_of(req), 0, 0};
      block.y_var = lp.add_variable(req.benefit);
      block.first_flow_var = static_cast<int>(lp.objective.size());
      for (size_t c = 0; c < block.commodities.size(); ++c) {
        for (int a = 0; a < 2 * m; ++a) lp.add_variable(0.0);
      }
      mp_blocks.push_back(std::move(block));
    } else {
      auto cols = enumerate_embeddings(net, req, edge_budget);
      result.truncated = result.truncated || cols.truncated;
      if (cols.embeddings.empty()) continue;  // Delta_j empty: contributes nothing
      TreeBlock block{&req, std::move(cols.embeddings), static_cast<int>(lp.objective.size())};
      for (size_t i = 0; i < block.cols.size(); ++i) lp.add_variable(req.benefit);
      tree_blocks.push_back(std::move(block));
    }
  }
  const int nvars = static_cast<int>(lp.objective.size());
  auto fresh_row = [&] { return std::vector<double>(nvars, 0.0); };

  // At most one (fractional) embedding per request.
  for (const auto& b : tree_blocks) {
    auto row = fresh_row();
    for (size_t i = 0; i < b.cols.size(); ++i) row[b.first_var + i] = 1.0;
    lp.add_constraint(std::move(row), Relation::LessEq, 1.0);
  }
  for (const auto& b : mp_blocks) {
    auto row = fresh_row();
    row[b.y_var] = 1.0;
    lp.add_constraint(std::move(row), Relation::LessEq, 1.0);
  }

  // Multipath blocks: a y_j-scaled copy of the commodity polytope. The
  // per-edge link f <= c_e * y_j keeps the block equal to y_j * Delta_j.
  for (const auto& b : mp_blocks) {
    auto fvar = [&](size_t c, int e, int dir) {
      return b.first_flow_var + static_cast<int>(c) * 2 * m + 2 * e + dir;
    };
    for (size_t c = 0; c < b.commodities.size(); ++c) {
      for (int v = 0; v < net.node_count(); ++v) {
        if (v == b.commodities[c].dst) continue;
        auto row = fresh_row();
        bool touched = false;
        for (int e : net.incident(v)) {
          int dir_out = net.edge(e).u == v ? 0 : 1;
          row[fvar(c, e, dir_out)] += 1.0;
          row[fvar(c, e, 1 - dir_out)] -= 1.0;
          touched = true;
        }
        if (v == b.commodities[c].src) {
          row[b.y_var] = -b.commodities[c].demand;
          touched = true;
        }
        if (touched) lp.add_constraint(std::move(row), Relation::Equal, 0.0);
      }
    }
    for (int e = 0; e < m; ++e) {
      auto row = fresh_row();
      for (size_t c = 0; c < b.commodities.size(); ++c) {
        row[fvar(c, e, 0)] += 1.0;
        row[fvar(c, e, 1)] += 1.0;
      }
      row[b.y_var] = -net.edge(e).capacity;
      lp.add_constraint(std::move(row), Relation::LessEq, 0.0);
    }
  }

  // Shared capacity rows per (resource, slot).
  for (long long t : slots) {
    for (int e = 0; e < m; ++e) {
      auto row = fresh_row();
      bool touched = false;
      for (const auto& b : tree_blocks) {
        if (!std::binary_search(b.req->duration.begin(), b.req->duration.end(), t)) continue;
        for (size_t i = 0; i < b.cols.size(); ++i) {
          auto it = b.cols[i].edge_reservation.find(e);
          if (it != b.cols[i].edge_reservation.end()) {
            row[b.first_var + i] = it->second;
            touched = true;
          }
        }
      }
      for (const auto& b : mp_blocks) {
        if (!std::binary_search(b.req->duration.begin(), b.req->duration.end(), t)) continue;
        for (size_t c = 0; c < b.commodities.size(); ++c) {
          row[b.first_flow_var + static_cast<int>(c) * 2 * m + 2 * e + 0] += 1.0;
          row[b.first_flow_var + static_cast<int>(c) * 2 * m + 2 * e + 1] += 1.0;
          touched = true;
        }
      }
      if (touched) lp.add_constraint(std::move(row), Relation::LessEq, net.edge(e).capacity);
    }
    for (int v = 0; v < net.node_count(); ++v) {
      if (std::isinf(net.node_capacity(v))) continue;
      auto row = fresh_row();
      bool touched = false;
      for (const auto& b : tree_blocks) {
        if (!std::binary_search(b.req->duration.begin(), b.req->duration.end(), t)) continue;
        for (size_t i = 0; i < b.cols.size(); ++i) {
          auto it = b.cols[i].node_usage.find(v);
          if (it != b.cols[i].node_usage.end()) {
            row[b.first_var + i] = it->second;
            touched = true;
          }
        }
      }
      if (touched) lp.add_constraint(std::move(row), Relation::LessEq, net.node_capacity(v));
    }
  }

  auto sol = lp_solve(lp);
  if (sol.status == LpStatus::Infeasible) {
    throw NumericalError("offline optimum LP reported infeasible");
  }
  if (sol.status == LpStatus::Unbounded) {
    throw NumericalError("offline optimum LP reported unbounded");
  }
  result.value = sol.value;
  return result;
}

std::pair<SteinerTree, double> brute_force_steiner(const SubstrateNetwork& net,
                                                   std::span<const double> edge_weight,
                                                   const std::vector<int>& terminals,
                                                   int edge_budget) {
  std::vector<double> zeros(net.node_count(), 0.0);
  return brute_force_node_weighted(net, edge_weight, zeros, terminals, edge_budget);
}

std::pair<SteinerTree, double> brute_force_node_weighted(const SubstrateNetwork& net,
                                                         std::span<const double> edge_cost,
                                                         std::span<const double> node_cost,
                                                         const std::vector<int>& terminals,
                                                         int edge_budget) {
  const SteinerTree* best = nullptr;
  double best_cost = kUnbounded;
  auto trees = enumerate_steiner_trees(net, terminals, edge_budget);
  for (const auto& tree : trees) {
    double c = 0;
    bool usable = true;
    for (int e : tree.edges) {
      if (std::isinf(edge_cost[e])) {
        usable = false;
        break;
      }
      c += edge_cost[e];
    }
    for (int v : tree.nodes) {
      if (!usable) break;
      if (std::isinf(node_cost[v])) {
        usable = false;
        break;
      }
      c += node_cost[v];
    }
    if (usable && c < best_cost) {
      best_cost = c;
      best = &tree;
    }
  }
  if (!best) throw DisconnectedError("no terminal-spanning tree exists");
  SteinerTree tree = *best;
  tree.edge_cost = tree_edge_cost(tree, edge_cost);
  tree.node_cost = tree_node_cost(tree, node_cost);
  return {tree, best_cost};
}

double max_covering_violation(const SubstrateNetwork& net,
                              const std::vector<VNetRequest>& requests,
                              const PriceState& state, int edge_budget) {
  double worst = -kUnbounded;
  for (const auto& req : requests) {
    auto zit = state.z.find(req.id);
    double z = zit == state.z.end() ? 0.0 : zit->second;
    EffectivePrices prices = effective_prices(state, net, req);

    if (std::holds_alternative<CustomerPipeTraffic>(req.traffic) &&
        req.routing == RoutingModel::Multipath) {
      // Minimize the X-cost over the whole polytope with the floor disabled.
      OracleConfig cfg;
      cfg.min_load_floor = 0.0;
      auto caps = net.edge_capacities();
      auto outcome = oracle_customer_pipe_mcf(net, caps, prices, req, cfg);
      if (!outcome.result) continue;  // Delta_j empty: no covering row
      worst = std::max(worst, req.benefit - z - outcome.result->gamma);
      continue;
    }
    auto cols = enumerate_embeddings(net, req, edge_budget);
    for (const auto& col : cols.embeddings) {
      worst = std::max(worst, req.benefit - z - column_price(col, prices));
    }
  }
  return worst == -kUnbounded ? 0.0 : worst;
}

}  // namespace vnet
