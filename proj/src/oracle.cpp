#include "vnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "vnet/lp.hpp"

namespace vnet {

namespace {
constexpr double kCapEps = 1e-9;
constexpr double kFlowEps = 1e-9;
}  // namespace

EffectivePrices EffectivePrices::zero(const SubstrateNetwork& net) {
  return {std::vector<double>(net.edge_count(), 0.0),
          std::vector<double>(net.node_count(), 0.0)};
}

std::string to_string(OracleReject r) {
  switch (r) {
    case OracleReject::Disconnected: return "disconnected";
    case OracleReject::NoFeasibleTree: return "no_feasible_tree";
    case OracleReject::Infeasible: return "infeasible";
  }
  return "?";
}

double column_price(const Embedding& emb, const EffectivePrices& prices) {
  double g = 0;
  for (const auto& [e, r] : emb.edge_reservation) g += r * prices.edge[e];
  for (const auto& [v, r] : emb.node_usage) g += r * prices.node[v];
  return g;
}

// ---------------------------------------------------------------------------
// Aggregate ingress, tree / single-path routing

OracleOutcome oracle_aggregate_tree(const SubstrateNetwork& net,
                                    std::span<const double> edge_capacity,
                                    std::span<const double> node_capacity,
                                    const EffectivePrices& prices,
                                    const VNetRequest& req,
                                    const OracleConfig& cfg) {
  const double ingress = std::get<AggregateIngressTraffic>(req.traffic).ingress;
  const double pr = req.packet_rate;
  const int k = static_cast<int>(req.terminals.size());

  // A positive packet rate below the load floor would put a sub-floor entry
  // in every embedding; no valid column exists in that regime.
  if (pr > 0 && pr < cfg.min_load_floor - kCapEps) {
    return OracleOutcome::rejected(OracleReject::Infeasible);
  }

  std::vector<bool> node_ok(net.node_count(), true);
  if (pr > 0) {
    for (int v = 0; v < net.node_count(); ++v) {
      node_ok[v] = node_capacity[v] >= pr - kCapEps;
    }
    for (int t : req.terminals) {
      if (!node_ok[t]) return OracleOutcome::rejected(OracleReject::Disconnected);
    }
  }

  // Step 1: delete undersized edges (and, with packet rates, undersized
  // nodes). Step 2: min-price Steiner tree over what remains.
  std::vector<double> ecost(net.edge_count());
  for (int e = 0; e < net.edge_count(); ++e) {
    const auto& ed = net.edge(e);
    bool usable = edge_capacity[e] >= ingress - kCapEps && node_ok[ed.u] && node_ok[ed.v];
    ecost[e] = usable ? ingress * prices.edge[e] : kUnbounded;
  }

  SteinerTree tree;
  double rho = 1;
  try {
    if (pr == 0) {
      if (cfg.tree_mode == TreeOracleMode::Exact) {
        tree = steiner_exact(net, ecost, req.terminals);
        rho = 1;
      } else {
        tree = mst_steiner_2approx(net, ecost, req.terminals);
        rho = 2;
      }
    } else {
      std::vector<double> ncost(net.node_count());
      for (int v = 0; v < net.node_count(); ++v) {
        ncost[v] = node_ok[v] ? pr * prices.node[v] : kUnbounded;
      }
      if (cfg.tree_mode == TreeOracleMode::Exact) {
        // Exhaustive node-weighted optimum; only meant for small instances.
        auto trees = enumerate_steiner_trees(net, req.terminals, cfg.exact_node_budget);
        const SteinerTree* best = nullptr;
        double best_cost = kUnbounded;
        for (const auto& cand : trees) {
          bool usable = true;
          for (int e : cand.edges) usable = usable && !std::isinf(ecost[e]);
          for (int v : cand.nodes) usable = usable && node_ok[v];
          if (!usable) continue;
          double c = tree_edge_cost(cand, ecost) + tree_node_cost(cand, ncost);
          if (c < best_cost) {
            best_cost = c;
            best = &cand;
          }
        }
        if (!best) return OracleOutcome::rejected(OracleReject::Disconnected);
        tree = *best;
        rho = 1;
      } else {
        tree = node_weighted_steiner_greedy(net, ecost, ncost, req.terminals);
        rho = 2.0 * std::log(static_cast<double>(k));
      }
    }
  } catch (const DisconnectedError&) {
    return OracleOutcome::rejected(OracleReject::Disconnected);
  }

  OracleResult res;
  for (int e : tree.edges) res.embedding.edge_reservation[e] = ingress;
  if (pr > 0) {
    for (int v : tree.nodes) res.embedding.node_usage[v] = pr;
  }
  res.gamma = column_price(res.embedding, prices);
  res.rho = std::max(1.0, rho);
  return OracleOutcome::ok(std::move(res));
}

// ---------------------------------------------------------------------------
// Hose model, tree routing

double hose_edge_reservation(const SubstrateNetwork& net,
                             const std::vector<int>& tree_edges, int e,
                             const VNetRequest& req) {
  const auto& hose = std::get<HoseTraffic>(req.traffic);
  // Partition the terminals by deleting e from the tree.
  std::vector<int> parent(net.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (int f : tree_edges) {
    if (f == e) continue;
    parent[find(net.edge(f).u)] = find(net.edge(f).v);
  }
  int side_a = find(net.edge(e).u);
  double a_out = 0, a_in = 0, b_out = 0, b_in = 0;
  for (int t : req.terminals) {
    const auto& b = hose.bounds.at(t);
    if (find(t) == side_a) {
      a_out += b.out;
      a_in += b.in;
    } else {
      b_out += b.out;
      b_in += b.in;
    }
  }
  return std::min(a_out, b_in) + std::min(a_in, b_out);
}

OracleOutcome oracle_hose_tree_exact(const SubstrateNetwork& net,
                                     std::span<const double> edge_capacity,
                                     std::span<const double> node_capacity,
                                     const EffectivePrices& prices,
                                     const VNetRequest& req,
                                     const OracleConfig& cfg) {
  const double pr = req.packet_rate;
  if (pr > 0 && pr < cfg.min_load_floor - kCapEps) {
    return OracleOutcome::rejected(OracleReject::Infeasible);
  }
  auto trees = enumerate_steiner_trees(net, req.terminals, cfg.hose_edge_budget);

  const SteinerTree* best = nullptr;
  double best_cost = kUnbounded;
  std::map<int, double> best_reservation;
  for (const auto& tree : trees) {
    std::map<int, double> reservation;
    bool feasible = true;
    double cost = 0;
    for (int e : tree.edges) {
      double u = hose_edge_reservation(net, tree.edges, e, req);
      if (u > edge_capacity[e] + kCapEps) {
        feasible = false;
        break;
      }
      reservation[e] = u;
      cost += u * prices.edge[e];
    }
    if (feasible && pr > 0) {
      for (int v : tree.nodes) {
        if (node_capacity[v] < pr - kCapEps) {
          feasible = false;
          break;
        }
        cost += pr * prices.node[v];
      }
    }
    if (!feasible) continue;
    if (cost < best_cost) {
      best_cost = cost;
      best = &tree;
      best_reservation = std::move(reservation);
    }
  }
  if (!best) return OracleOutcome::rejected(OracleReject::NoFeasibleTree);

  OracleResult res;
  res.embedding.edge_reservation = std::move(best_reservation);
  if (pr > 0) {
    for (int v : best->nodes) res.embedding.node_usage[v] = pr;
  }
  res.gamma = column_price(res.embedding, prices);
  res.rho = 1;
  return OracleOutcome::ok(std::move(res));
}

// ---------------------------------------------------------------------------
// Customer pipe, multipath routing

namespace {

struct Commodity {
  int src;
  int dst;
  double demand;
};

struct McfSolution {
  bool feasible = false;
  // arc flows per commodity: flow[c][2*e + dir], dir 0 = u->v.
  std::vector<std::vector<double>> flow;
};

McfSolution solve_mcf(const SubstrateNetwork& net, std::span<const double> edge_capacity,
                      const EffectivePrices& prices, const std::vector<Commodity>& commodities,
                      const std::vector<bool>& edge_allowed) {
  const int m = net.edge_count();
  const int nc = static_cast<int>(commodities.size());
  std::vector<int> usable;
  for (int e = 0; e < m; ++e) {
    if (edge_allowed[e]) usable.push_back(e);
  }
  const int arcs = 2 * static_cast<int>(usable.size());
  auto var = [&](int c, int ui, int dir) { return c * arcs + 2 * ui + dir; };

  LinearProgram lp;
  lp.direction = Objective::Minimize;
  lp.objective.assign(nc * arcs, 0.0);
  for (int c = 0; c < nc; ++c) {
    for (size_t ui = 0; ui < usable.size(); ++ui) {
      double p = prices.edge[usable[ui]];
      lp.objective[var(c, static_cast<int>(ui), 0)] = p;
      lp.objective[var(c, static_cast<int>(ui), 1)] = p;
    }
  }
  // Flow conservation (skip the sink row; it is implied).
  for (int c = 0; c < nc; ++c) {
    for (int v = 0; v < net.node_count(); ++v) {
      if (v == commodities[c].dst) continue;
      std::vector<double> row(nc * arcs, 0.0);
      bool touched = false;
      for (size_t ui = 0; ui < usable.size(); ++ui) {
        const auto& ed = net.edge(usable[ui]);
        if (ed.u == v) {
          row[var(c, static_cast<int>(ui), 0)] += 1.0;  // leaves v
          row[var(c, static_cast<int>(ui), 1)] -= 1.0;
          touched = true;
        } else if (ed.v == v) {
          row[var(c, static_cast<int>(ui), 1)] += 1.0;
          row[var(c, static_cast<int>(ui), 0)] -= 1.0;
          touched = true;
        }
      }
      double rhs = (v == commodities[c].src) ? commodities[c].demand : 0.0;
      if (!touched && rhs == 0.0) continue;
      lp.add_constraint(std::move(row), Relation::Equal, rhs);
    }
  }
  // Shared capacity: both directions of every commodity count.
  for (size_t ui = 0; ui < usable.size(); ++ui) {
    std::vector<double> row(nc * arcs, 0.0);
    for (int c = 0; c < nc; ++c) {
      row[var(c, static_cast<int>(ui), 0)] = 1.0;
      row[var(c, static_cast<int>(ui), 1)] = 1.0;
    }
    lp.add_constraint(std::move(row), Relation::LessEq, edge_capacity[usable[ui]]);
  }

  auto sol = lp_solve(lp);
  McfSolution out;
  if (sol.status != LpStatus::Optimal) return out;
  out.feasible = true;
  out.flow.assign(nc, std::vector<double>(2 * m, 0.0));
  for (int c = 0; c < nc; ++c) {
    for (size_t ui = 0; ui < usable.size(); ++ui) {
      out.flow[c][2 * usable[ui] + 0] = sol.x[var(c, static_cast<int>(ui), 0)];
      out.flow[c][2 * usable[ui] + 1] = sol.x[var(c, static_cast<int>(ui), 1)];
    }
  }
  return out;
}

// Path decomposition with cycle cancelling; drops any leftover circulation.
std::vector<std::pair<std::vector<int>, double>> decompose(const SubstrateNetwork& net,
                                                           std::vector<double>& arc_flow,
                                                           const Commodity& cm) {
  std::vector<std::pair<std::vector<int>, double>> paths;
  double shipped = 0;
  while (shipped < cm.demand - kFlowEps) {
    std::vector<int> walk_arcs;
    std::vector<int> walk_nodes{cm.src};
    std::map<int, int> seen{{cm.src, 0}};
    int cur = cm.src;
    while (cur != cm.dst) {
      int chosen = -1;
      for (int e : net.incident(cur)) {
        int dir = net.edge(e).u == cur ? 0 : 1;
        if (arc_flow[2 * e + dir] > kFlowEps) {
          chosen = 2 * e + dir;
          break;
        }
      }
      if (chosen < 0) {
        throw NumericalError("flow decomposition dead end");
      }
      int nxt = net.edge(chosen / 2).other(cur);
      auto it = seen.find(nxt);
      if (it != seen.end()) {
        // Cancel the cycle we just closed.
        int pos = it->second;
        double c = arc_flow[chosen];
        for (size_t i = pos; i < walk_arcs.size(); ++i) c = std::min(c, arc_flow[walk_arcs[i]]);
        arc_flow[chosen] -= c;
        for (size_t i = pos; i < walk_arcs.size(); ++i) arc_flow[walk_arcs[i]] -= c;
        for (size_t i = pos; i < walk_arcs.size(); ++i) seen.erase(walk_nodes[i + 1]);
        walk_arcs.resize(pos);
        walk_nodes.resize(pos + 1);
        cur = walk_nodes.back();
        continue;
      }
      walk_arcs.push_back(chosen);
      walk_nodes.push_back(nxt);
      seen[nxt] = static_cast<int>(walk_arcs.size()) - 1;
      cur = nxt;
    }
    double f = cm.demand - shipped;
    for (int a : walk_arcs) f = std::min(f, arc_flow[a]);
    for (int a : walk_arcs) arc_flow[a] -= f;
    std::vector<int> edge_path;
    for (int a : walk_arcs) edge_path.push_back(a / 2);
    paths.emplace_back(std::move(edge_path), f);
    shipped += f;
  }
  return paths;
}

}  // namespace

OracleOutcome oracle_customer_pipe_mcf(const SubstrateNetwork& net,
                                       std::span<const double> edge_capacity,
                                       const EffectivePrices& prices,
                                       const VNetRequest& req,
                                       const OracleConfig& cfg) {
  const auto& cp = std::get<CustomerPipeTraffic>(req.traffic);
  std::vector<Commodity> commodities;
  for (const auto& [pair, d] : cp.demands) {
    if (d > 0) commodities.push_back({pair.first, pair.second, d});
  }

  std::vector<bool> allowed(net.edge_count(), true);
  bool rerouted = false;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto mcf = solve_mcf(net, edge_capacity, prices, commodities, allowed);
    if (!mcf.feasible) return OracleOutcome::rejected(OracleReject::Infeasible);

    Embedding emb;
    for (size_t c = 0; c < commodities.size(); ++c) {
      auto paths = decompose(net, mcf.flow[c], commodities[c]);
      for (const auto& [edges, f] : paths) {
        for (int e : edges) emb.edge_reservation[e] += f;
      }
      auto key = std::make_pair(commodities[c].src, commodities[c].dst);
      emb.commodity_flows[key] = std::move(paths);
    }
    for (auto it = emb.edge_reservation.begin(); it != emb.edge_reservation.end();) {
      if (it->second <= kFlowEps) it = emb.edge_reservation.erase(it);
      else ++it;
    }

    // Entries below the floor break the minimum-load precondition: forbid
    // the offending edges and reroute once.
    std::vector<int> subfloor;
    for (const auto& [e, r] : emb.edge_reservation) {
      if (r < cfg.min_load_floor - kFlowEps) subfloor.push_back(e);
    }
    if (subfloor.empty()) {
      OracleResult res;
      res.gamma = column_price(emb, prices);
      res.embedding = std::move(emb);
      res.rho = 1;
      OracleOutcome out = OracleOutcome::ok(std::move(res));
      out.floor_reroute_used = rerouted;
      return out;
    }
    if (attempt == 1) break;
    for (int e : subfloor) allowed[e] = false;
    rerouted = true;
  }
  return OracleOutcome::rejected(OracleReject::Infeasible);
}

// ---------------------------------------------------------------------------

std::optional<OracleOutcome> dispatch_oracle(const SubstrateNetwork& net,
                                             std::span<const double> edge_capacity,
                                             std::span<const double> node_capacity,
                                             const EffectivePrices& prices,
                                             const VNetRequest& req,
                                             const OracleConfig& cfg) {
  if (std::holds_alternative<CustomerPipeTraffic>(req.traffic)) {
    if (req.routing != RoutingModel::Multipath) return std::nullopt;
    return oracle_customer_pipe_mcf(net, edge_capacity, prices, req, cfg);
  }
  if (std::holds_alternative<HoseTraffic>(req.traffic)) {
    if (req.routing != RoutingModel::Tree) return std::nullopt;
    return oracle_hose_tree_exact(net, edge_capacity, node_capacity, prices, req, cfg);
  }
  if (req.routing == RoutingModel::Multipath) return std::nullopt;
  return oracle_aggregate_tree(net, edge_capacity, node_capacity, prices, req, cfg);
}

}  // namespace vnet
