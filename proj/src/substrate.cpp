#include "vnet/substrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace vnet {

using nlohmann::json;

int SubstrateNetwork::add_node(const std::string& id, double capacity) {
  if (index_.count(id)) {
    throw ValidationError("duplicate node id '" + id + "'");
  }
  int idx = node_count();
  node_ids_.push_back(id);
  node_caps_.push_back(capacity);
  index_[id] = idx;
  incident_.emplace_back();
  return idx;
}

int SubstrateNetwork::add_edge(const std::string& u, const std::string& v, double capacity) {
  int ui = require_node(u);
  int vi = require_node(v);
  if (ui == vi) {
    throw ValidationError("self-loop on node '" + u + "'");
  }
  if (find_edge(ui, vi)) {
    throw ValidationError("parallel edge " + u + "-" + v + " (merge capacities first)");
  }
  int e = edge_count();
  edges_.push_back({ui, vi, capacity});
  incident_[ui].push_back(e);
  incident_[vi].push_back(e);
  return e;
}

int SubstrateNetwork::require_node(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw ValidationError("unknown node id '" + id + "'");
  }
  return it->second;
}

std::optional<int> SubstrateNetwork::node_index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> SubstrateNetwork::find_edge(int u, int v) const {
  for (int e : incident_[u]) {
    if (edges_[e].other(u) == v) return e;
  }
  return std::nullopt;
}

void SubstrateNetwork::validate() const {
  for (int v = 0; v < node_count(); ++v) {
    double c = node_caps_[v];
    if (std::isnan(c) || c < 1.0) {
      throw ValidationError("node '" + node_ids_[v] + "' capacity " + std::to_string(c) +
                            " below 1");
    }
  }
  for (int e = 0; e < edge_count(); ++e) {
    const auto& ed = edges_[e];
    if (ed.u < 0 || ed.u >= node_count() || ed.v < 0 || ed.v >= node_count()) {
      throw ValidationError("edge " + std::to_string(e) + " references a missing node");
    }
    if (ed.u == ed.v) {
      throw ValidationError("self-loop on node '" + node_ids_[ed.u] + "'");
    }
    if (!(ed.capacity >= 1.0) || std::isinf(ed.capacity)) {
      throw ValidationError("edge " + edge_name(e) + " capacity below 1");
    }
  }
  // add_edge already rejects parallels; re-check here for hand-built graphs.
  for (int e = 0; e < edge_count(); ++e) {
    for (int f = e + 1; f < edge_count(); ++f) {
      bool same = (edges_[e].u == edges_[f].u && edges_[e].v == edges_[f].v) ||
                  (edges_[e].u == edges_[f].v && edges_[e].v == edges_[f].u);
      if (same) throw ValidationError("parallel edge " + edge_name(e));
    }
  }
}

std::vector<double> SubstrateNetwork::edge_capacities() const {
  std::vector<double> caps(edge_count());
  for (int e = 0; e < edge_count(); ++e) caps[e] = edges_[e].capacity;
  return caps;
}

std::string SubstrateNetwork::edge_name(int e) const {
  return node_ids_[edges_[e].u] + "-" + node_ids_[edges_[e].v];
}

std::vector<int> SubstrateNetwork::lex_ranks() const {
  std::vector<int> order(node_count());
  for (int i = 0; i < node_count(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return node_ids_[a] < node_ids_[b]; });
  std::vector<int> rank(node_count());
  for (int i = 0; i < node_count(); ++i) rank[order[i]] = i;
  return rank;
}

// --------------------------------------------------------------------------
// Instance file I/O

SubstrateNetwork load_substrate(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("substrate: ") + ex.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
    throw ParseError("substrate: expected object with 'nodes' and 'edges'");
  }
  SubstrateNetwork net;
  try {
    for (const auto& n : doc.at("nodes")) {
      double cap = kUnbounded;
      if (n.contains("capacity") && !n.at("capacity").is_null()) {
        cap = n.at("capacity").get<double>();
      }
      net.add_node(n.at("id").get<std::string>(), cap);
    }
    for (const auto& e : doc.at("edges")) {
      net.add_edge(e.at("u").get<std::string>(), e.at("v").get<std::string>(),
                   e.at("capacity").get<double>());
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("substrate: ") + ex.what());
  }
  net.validate();
  return net;
}

std::string serialize_substrate(const SubstrateNetwork& net) {
  json nodes = json::array();
  for (int v = 0; v < net.node_count(); ++v) {
    json n{{"id", net.node_id(v)}};
    if (!std::isinf(net.node_capacity(v))) n["capacity"] = net.node_capacity(v);
    nodes.push_back(std::move(n));
  }
  json edges = json::array();
  for (int e = 0; e < net.edge_count(); ++e) {
    const auto& ed = net.edge(e);
    edges.push_back({{"u", net.node_id(ed.u)},
                     {"v", net.node_id(ed.v)},
                     {"capacity", ed.capacity}});
  }
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}}.dump(2) + "\n";
}

SubstrateNetwork load_substrate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_substrate(buf.str());
}

SubstrateNetwork load_edge_list(const std::string& text) {
  SubstrateNetwork net;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::tuple<std::string, std::string, double>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string u, v;
    if (!(ls >> u)) continue;  // blank
    double cap = 1.0;
    if (!(ls >> v)) throw ParseError("edge list line " + std::to_string(lineno) + ": missing endpoint");
    ls >> cap;
    if (!net.node_index(u)) net.add_node(u);
    if (!net.node_index(v)) net.add_node(v);
    edges.emplace_back(u, v, cap);
  }
  for (auto& [u, v, cap] : edges) net.add_edge(u, v, cap);
  net.validate();
  return net;
}

SubstrateNetwork load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return load_substrate(text);
  return load_edge_list(text);
}

// --------------------------------------------------------------------------
// Lexicographic shortest paths

namespace {

struct QueueEntry {
  double dist;
  std::vector<int> rank_path;  // lexicographic key
  int node;
  std::vector<int> node_path;
  std::vector<int> edge_path;
};

struct EntryGreater {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.dist != b.dist) return a.dist > b.dist;
    if (a.rank_path != b.rank_path) return a.rank_path > b.rank_path;
    return a.node > b.node;
  }
};

}  // namespace

std::vector<PathInfo> lex_shortest_paths(const SubstrateNetwork& net,
                                         std::span<const double> edge_weight,
                                         std::span<const double> node_enter_cost,
                                         int source) {
  const int n = net.node_count();
  const auto rank = net.lex_ranks();
  std::vector<PathInfo> out(n);
  std::vector<bool> settled(n, false);

  auto enter = [&](int v) -> double {
    return node_enter_cost.empty() ? 0.0 : node_enter_cost[v];
  };

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, EntryGreater> pq;
  pq.push({0.0, {rank[source]}, source, {source}, {}});
  while (!pq.empty()) {
    QueueEntry cur = pq.top();
    pq.pop();
    if (settled[cur.node]) continue;
    settled[cur.node] = true;
    out[cur.node] = {cur.dist, cur.node_path, cur.edge_path};
    for (int e : net.incident(cur.node)) {
      double w = edge_weight[e];
      if (std::isinf(w)) continue;
      int nb = net.edge(e).other(cur.node);
      if (settled[nb]) continue;
      double ec = enter(nb);
      if (std::isinf(ec)) continue;
      QueueEntry next = cur;
      next.dist += w + ec;
      next.rank_path.push_back(rank[nb]);
      next.node = nb;
      next.node_path.push_back(nb);
      next.edge_path.push_back(e);
      pq.push(std::move(next));
    }
  }
  return out;
}

const PathInfo& TerminalClosure::between(int a, int b) const {
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  return paths_.at(key);
}

void TerminalClosure::set(int a, int b, PathInfo info) {
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  paths_[key] = std::move(info);
}

TerminalClosure shortest_path_closure(const SubstrateNetwork& net,
                                      std::span<const double> edge_weight,
                                      const std::vector<int>& terminals) {
  const auto rank = net.lex_ranks();
  // Run from the lex-least endpoint of each pair so that both orientations
  // of a query report the same substrate path.
  std::vector<int> order = terminals;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return rank[a] < rank[b]; });

  TerminalClosure closure(terminals);
  for (size_t i = 0; i < order.size(); ++i) {
    auto paths = lex_shortest_paths(net, edge_weight, {}, order[i]);
    for (size_t j = i + 1; j < order.size(); ++j) {
      closure.set(order[i], order[j], paths[order[j]]);
    }
  }
  return closure;
}

}  // namespace vnet
