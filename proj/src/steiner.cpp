#include "vnet/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace vnet {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// MST of the given edge set (ties by edge index), then iterative removal of
// non-terminal leaves. The shared last step of every tree construction here.
SteinerTree finalize_tree(const SubstrateNetwork& net, std::vector<int> edges,
                          const std::vector<int>& terminals,
                          std::span<const double> edge_weight) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::stable_sort(edges.begin(), edges.end(), [&](int a, int b) {
    return edge_weight[a] < edge_weight[b];
  });

  Dsu dsu(net.node_count());
  std::vector<int> kept;
  for (int e : edges) {
    if (dsu.unite(net.edge(e).u, net.edge(e).v)) kept.push_back(e);
  }
  for (size_t i = 1; i < terminals.size(); ++i) {
    if (dsu.find(terminals[0]) != dsu.find(terminals[i])) {
      throw DisconnectedError("terminals not connected by the collected edges");
    }
  }

  std::vector<int> degree(net.node_count(), 0);
  std::set<int> tree_edges(kept.begin(), kept.end());
  for (int e : kept) {
    ++degree[net.edge(e).u];
    ++degree[net.edge(e).v];
  }
  std::set<int> terminal_set(terminals.begin(), terminals.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = tree_edges.begin(); it != tree_edges.end();) {
      const auto& ed = net.edge(*it);
      int leaf = -1;
      if (degree[ed.u] == 1 && !terminal_set.count(ed.u)) leaf = ed.u;
      else if (degree[ed.v] == 1 && !terminal_set.count(ed.v)) leaf = ed.v;
      if (leaf >= 0) {
        --degree[ed.u];
        --degree[ed.v];
        it = tree_edges.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }

  SteinerTree tree;
  tree.edges.assign(tree_edges.begin(), tree_edges.end());
  std::set<int> nodes;
  for (int e : tree.edges) {
    nodes.insert(net.edge(e).u);
    nodes.insert(net.edge(e).v);
  }
  tree.nodes.assign(nodes.begin(), nodes.end());
  tree.edge_cost = tree_edge_cost(tree, edge_weight);
  return tree;
}

}  // namespace

bool SteinerTree::contains_node(int v) const {
  return std::binary_search(nodes.begin(), nodes.end(), v);
}

double tree_edge_cost(const SteinerTree& tree, std::span<const double> edge_weight) {
  double c = 0;
  for (int e : tree.edges) c += edge_weight[e];
  return c;
}

double tree_node_cost(const SteinerTree& tree, std::span<const double> node_cost) {
  double c = 0;
  for (int v : tree.nodes) c += node_cost[v];
  return c;
}

SteinerTree mst_steiner_2approx(const SubstrateNetwork& net,
                                std::span<const double> edge_weight,
                                const std::vector<int>& terminals) {
  auto closure = shortest_path_closure(net, edge_weight, terminals);
  const auto rank = net.lex_ranks();

  struct ClosureEdge {
    double w;
    int ra, rb;  // lex ranks, ra < rb
    int a, b;
  };
  std::vector<ClosureEdge> cedges;
  for (size_t i = 0; i < terminals.size(); ++i) {
    for (size_t j = i + 1; j < terminals.size(); ++j) {
      const auto& info = closure.between(terminals[i], terminals[j]);
      if (std::isinf(info.weight)) {
        throw DisconnectedError("terminals are disconnected");
      }
      int ra = rank[terminals[i]], rb = rank[terminals[j]];
      if (ra > rb) std::swap(ra, rb);
      cedges.push_back({info.weight, ra, rb, terminals[i], terminals[j]});
    }
  }
  std::sort(cedges.begin(), cedges.end(), [](const ClosureEdge& x, const ClosureEdge& y) {
    if (x.w != y.w) return x.w < y.w;
    if (x.ra != y.ra) return x.ra < y.ra;
    return x.rb < y.rb;
  });

  Dsu dsu(net.node_count());
  std::vector<int> expanded;
  for (const auto& ce : cedges) {
    if (!dsu.unite(ce.a, ce.b)) continue;
    const auto& info = closure.between(ce.a, ce.b);
    expanded.insert(expanded.end(), info.edges.begin(), info.edges.end());
  }
  return finalize_tree(net, std::move(expanded), terminals, edge_weight);
}

// --------------------------------------------------------------------------
// Dreyfus-Wagner

SteinerTree steiner_exact(const SubstrateNetwork& net,
                          std::span<const double> edge_weight,
                          const std::vector<int>& terminals,
                          int max_terminals) {
  const int k = static_cast<int>(terminals.size());
  const int n = net.node_count();
  if (k > max_terminals) {
    throw BudgetError("steiner_exact: " + std::to_string(k) + " terminals exceed the cap");
  }

  // All-pairs shortest paths (lexicographic tie-break for reproducibility).
  std::vector<std::vector<PathInfo>> sp(n);
  for (int s = 0; s < n; ++s) sp[s] = lex_shortest_paths(net, edge_weight, {}, s);

  const int root = terminals[0];
  const int bits = k - 1;  // masks over terminals[1..]
  const int full = (1 << bits) - 1;
  auto dist = [&](int u, int v) { return sp[u][v].weight; };

  // dp[mask][v]: cheapest tree spanning {terminals in mask} plus v.
  // Realized either by walking v to u and splitting mask at u, or (for
  // singletons) by the shortest path itself.
  std::vector<std::vector<double>> dp(full + 1, std::vector<double>(n, kUnbounded));
  std::vector<std::vector<int>> walk_from(full + 1, std::vector<int>(n, -1));
  std::vector<std::vector<int>> split_sub(full + 1, std::vector<int>(n, 0));

  for (int i = 0; i < bits; ++i) {
    int t = terminals[i + 1];
    for (int v = 0; v < n; ++v) {
      dp[1 << i][v] = dist(t, v);
      walk_from[1 << i][v] = t;
    }
  }

  std::vector<double> tmp(n);
  std::vector<int> tmp_sub(n);
  for (int mask = 1; mask <= full; ++mask) {
    if ((mask & (mask - 1)) == 0) continue;  // singleton handled above
    for (int v = 0; v < n; ++v) {
      tmp[v] = kUnbounded;
      tmp_sub[v] = 0;
      for (int sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
        if (sub > (mask ^ sub)) continue;  // each split once
        double c = dp[sub][v] + dp[mask ^ sub][v];
        if (c < tmp[v]) {
          tmp[v] = c;
          tmp_sub[v] = sub;
        }
      }
    }
    for (int v = 0; v < n; ++v) {
      for (int u = 0; u < n; ++u) {
        double c = tmp[u] + dist(u, v);
        if (c < dp[mask][v]) {
          dp[mask][v] = c;
          walk_from[mask][v] = u;
          split_sub[mask][v] = tmp_sub[u];
        }
      }
    }
  }

  if (std::isinf(dp[full][root])) {
    throw DisconnectedError("terminals are disconnected");
  }

  // Reconstruction: unwind the walk, then recurse into the split halves.
  std::vector<int> edges;
  std::vector<std::pair<int, int>> stack{{full, root}};
  while (!stack.empty()) {
    auto [mask, v] = stack.back();
    stack.pop_back();
    int u = walk_from[mask][v];
    const auto& path = sp[u][v];
    edges.insert(edges.end(), path.edges.begin(), path.edges.end());
    if ((mask & (mask - 1)) == 0) continue;  // base: walk to the terminal
    int sub = split_sub[mask][v];
    stack.push_back({sub, u});
    stack.push_back({mask ^ sub, u});
  }
  return finalize_tree(net, std::move(edges), terminals, edge_weight);
}

// --------------------------------------------------------------------------
// Klein-Ravi style greedy for combined edge + node costs

SteinerTree node_weighted_steiner_greedy(const SubstrateNetwork& net,
                                         std::span<const double> edge_cost,
                                         std::span<const double> node_cost,
                                         const std::vector<int>& terminals) {
  const int n = net.node_count();
  std::vector<int> comp_of(n, -1);
  std::vector<std::vector<int>> comp_nodes;
  std::vector<bool> alive;
  for (int t : terminals) {
    comp_of[t] = static_cast<int>(comp_nodes.size());
    comp_nodes.push_back({t});
    alive.push_back(true);
  }
  int alive_count = static_cast<int>(comp_nodes.size());
  std::vector<int> bought_edges;

  std::vector<double> enter(n);
  auto refresh_enter = [&]() {
    for (int v = 0; v < n; ++v) {
      enter[v] = (comp_of[v] >= 0 && alive[comp_of[v]]) ? 0.0 : node_cost[v];
    }
  };

  while (alive_count > 1) {
    refresh_enter();
    double best_ratio = kUnbounded;
    int best_center = -1;
    int best_m = 0;
    for (int v = 0; v < n; ++v) {
      if (std::isinf(node_cost[v])) continue;
      auto sp = lex_shortest_paths(net, edge_cost, enter, v);
      double center_cost = enter[v];  // 0 when v already belongs to a component
      // Distance of each live component = cheapest arrival at any of its nodes.
      std::vector<std::pair<double, int>> comp_dist;
      for (size_t c = 0; c < comp_nodes.size(); ++c) {
        if (!alive[c]) continue;
        double d = kUnbounded;
        for (int u : comp_nodes[c]) d = std::min(d, sp[u].weight);
        if (!std::isinf(d)) comp_dist.push_back({d, static_cast<int>(c)});
      }
      std::sort(comp_dist.begin(), comp_dist.end());
      double run = center_cost;
      for (size_t m = 1; m <= comp_dist.size(); ++m) {
        run += comp_dist[m - 1].first;
        if (m < 2) continue;
        double ratio = run / static_cast<double>(m);
        if (ratio < best_ratio) {
          best_ratio = ratio;
          best_center = v;
          best_m = static_cast<int>(m);
        }
      }
    }
    if (best_center < 0) throw DisconnectedError("terminals are disconnected");

    // Re-run the winning center and merge its best_m nearest components
    // (plus anything the chosen paths run through).
    auto sp = lex_shortest_paths(net, edge_cost, enter, best_center);
    std::vector<std::pair<double, int>> comp_dist;
    for (size_t c = 0; c < comp_nodes.size(); ++c) {
      if (!alive[c]) continue;
      double d = kUnbounded;
      for (int u : comp_nodes[c]) d = std::min(d, sp[u].weight);
      if (!std::isinf(d)) comp_dist.push_back({d, static_cast<int>(c)});
    }
    std::sort(comp_dist.begin(), comp_dist.end());

    std::set<int> merged_nodes{best_center};
    std::set<int> touched_comps;
    for (int i = 0; i < best_m; ++i) {
      int c = comp_dist[i].second;
      touched_comps.insert(c);
      double d = kUnbounded;
      int arrival = -1;
      for (int u : comp_nodes[c]) {
        if (sp[u].weight < d) {
          d = sp[u].weight;
          arrival = u;
        }
      }
      for (int e : sp[arrival].edges) bought_edges.push_back(e);
      for (int u : sp[arrival].nodes) {
        merged_nodes.insert(u);
        if (comp_of[u] >= 0 && alive[comp_of[u]]) touched_comps.insert(comp_of[u]);
      }
    }
    for (int c : touched_comps) {
      for (int u : comp_nodes[c]) merged_nodes.insert(u);
      alive[c] = false;
      --alive_count;
    }
    int fresh = static_cast<int>(comp_nodes.size());
    comp_nodes.emplace_back(merged_nodes.begin(), merged_nodes.end());
    alive.push_back(true);
    ++alive_count;
    for (int u : merged_nodes) comp_of[u] = fresh;
  }

  SteinerTree tree = finalize_tree(net, std::move(bought_edges), terminals, edge_cost);
  tree.node_cost = tree_node_cost(tree, node_cost);
  return tree;
}

// --------------------------------------------------------------------------
// Exhaustive enumeration

std::vector<SteinerTree> enumerate_steiner_trees(const SubstrateNetwork& net,
                                                 const std::vector<int>& terminals,
                                                 int edge_budget) {
  const int m = net.edge_count();
  if (m > edge_budget) {
    throw BudgetError("tree enumeration: " + std::to_string(m) + " edges exceed budget " +
                      std::to_string(edge_budget));
  }
  std::vector<SteinerTree> out;
  std::vector<int> degree(net.node_count());
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    Dsu dsu(net.node_count());
    std::fill(degree.begin(), degree.end(), 0);
    int edge_count = 0;
    int node_count = 0;
    bool acyclic = true;
    for (int e = 0; e < m && acyclic; ++e) {
      if (!(mask & (1u << e))) continue;
      const auto& ed = net.edge(e);
      if (degree[ed.u]++ == 0) ++node_count;
      if (degree[ed.v]++ == 0) ++node_count;
      ++edge_count;
      acyclic = dsu.unite(ed.u, ed.v);
    }
    if (!acyclic || edge_count != node_count - 1) continue;  // cycle or forest

    bool ok = true;
    for (int t : terminals) {
      if (degree[t] == 0 || dsu.find(t) != dsu.find(terminals[0])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    SteinerTree tree;
    for (int e = 0; e < m; ++e) {
      if (!(mask & (1u << e))) continue;
      tree.edges.push_back(e);
    }
    std::set<int> terminal_set(terminals.begin(), terminals.end());
    for (int v = 0; v < net.node_count(); ++v) {
      if (degree[v] == 1 && !terminal_set.count(v)) {
        ok = false;  // non-terminal leaf
        break;
      }
      if (degree[v] > 0) tree.nodes.push_back(v);
    }
    if (!ok) continue;
    out.push_back(std::move(tree));
  }
  return out;
}

}  // namespace vnet
