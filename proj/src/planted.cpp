#include "vnet/planted.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace vnet {

namespace {

std::string padded_name(int i) {
  std::string s = std::to_string(i);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return "n" + s;
}

}  // namespace

SubstrateNetwork random_connected_topology(int nodes, int extra_edges, uint64_t seed) {
  std::mt19937_64 rng(seed);
  SubstrateNetwork net;
  for (int i = 0; i < nodes; ++i) net.add_node(padded_name(i));
  for (int i = 1; i < nodes; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    net.add_edge(padded_name(i), padded_name(pick(rng)), 1.0);
  }
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  int added = 0, attempts = 0;
  while (added < extra_edges && attempts < 50 * (extra_edges + 1)) {
    ++attempts;
    int u = pick(rng), v = pick(rng);
    if (u == v) continue;
    if (net.find_edge(u, v)) continue;
    net.add_edge(net.node_id(u), net.node_id(v), 1.0);
    ++added;
  }
  net.validate();
  return net;
}

SubstrateNetwork inflate_capacities(const SubstrateNetwork& net, double factor) {
  SubstrateNetwork out;
  for (int v = 0; v < net.node_count(); ++v) {
    out.add_node(net.node_id(v), net.node_capacity(v));
  }
  for (int e = 0; e < net.edge_count(); ++e) {
    const auto& ed = net.edge(e);
    out.add_edge(net.node_id(ed.u), net.node_id(ed.v), ed.capacity * factor);
  }
  out.validate();
  return out;
}

PlantedInstance generate_planted_instance(const SubstrateNetwork& topology,
                                          const PlantedParams& params) {
  if (params.request_count <= 0 || params.terminals_per_request < 2 ||
      params.walk_stride <= 0 || params.ingress < 1.0 || params.max_duration < 1) {
    throw ValidationError("planted generator: invalid parameters");
  }
  std::mt19937_64 rng(params.seed);
  const int n = topology.node_count();
  std::uniform_int_distribution<int> pick_node(0, n - 1);
  std::uniform_real_distribution<double> pick_benefit(params.benefit_lo, params.benefit_hi);
  std::uniform_int_distribution<int> pick_len(1, params.max_duration);

  std::vector<std::set<int>> planted_edges(params.request_count);
  std::vector<VNetRequest> requests;
  const long long max_steps = 200LL * n * params.walk_stride;

  for (int r = 0; r < params.request_count; ++r) {
    bool done = false;
    for (int attempt = 0; attempt < 100 && !done; ++attempt) {
      int cur = pick_node(rng);
      std::set<int> terminals{cur};
      std::set<int> walk_edges;
      long long steps = 0;
      auto step = [&]() {
        const auto& inc = topology.incident(cur);
        std::uniform_int_distribution<size_t> pick_edge(0, inc.size() - 1);
        int e = inc[pick_edge(rng)];
        walk_edges.insert(e);
        cur = topology.edge(e).other(cur);
        ++steps;
      };
      // Collect a terminal every `stride` steps; when the walk lands on a
      // node already in the VNet, continue to the next new node.
      while (static_cast<int>(terminals.size()) < params.terminals_per_request &&
             steps < max_steps) {
        for (int s = 0; s < params.walk_stride && steps < max_steps; ++s) step();
        while (terminals.count(cur) && steps < max_steps) step();
        if (!terminals.count(cur)) terminals.insert(cur);
      }
      if (static_cast<int>(terminals.size()) < params.terminals_per_request) continue;

      planted_edges[r] = std::move(walk_edges);
      VNetRequest req;
      req.id = r + 1;
      req.terminals.assign(terminals.begin(), terminals.end());
      req.traffic = AggregateIngressTraffic{params.ingress};
      req.routing = RoutingModel::Tree;
      req.benefit = std::max(1.0, pick_benefit(rng));
      long long start = r + 1;
      int len = pick_len(rng);
      for (int t = 0; t < len; ++t) req.duration.push_back(start + t);
      requests.push_back(std::move(req));
      done = true;
    }
    if (!done) {
      throw ValidationError("planted generator: retries exhausted (disconnected topology?)");
    }
  }

  // Capacity = total planted ingress crossing the edge, at least 1.
  std::vector<double> load(topology.edge_count(), 0.0);
  for (int r = 0; r < params.request_count; ++r) {
    for (int e : planted_edges[r]) load[e] += params.ingress;
  }
  SubstrateNetwork net;
  for (int v = 0; v < n; ++v) net.add_node(topology.node_id(v), topology.node_capacity(v));
  for (int e = 0; e < topology.edge_count(); ++e) {
    const auto& ed = topology.edge(e);
    net.add_edge(topology.node_id(ed.u), topology.node_id(ed.v), std::max(1.0, load[e]));
  }
  net.validate();
  validate_sequence(net, requests);

  // Simultaneous feasibility audit: the planted loads fit by construction.
  for (int e = 0; e < net.edge_count(); ++e) {
    if (load[e] > net.edge(e).capacity + 1e-9) {
      throw ValidationError("planted generator: feasibility audit failed");
    }
  }

  PlantedInstance inst{std::move(net), std::move(requests), 0.0};
  for (const auto& r : inst.requests) inst.planted_optimum += r.benefit;
  return inst;
}

}  // namespace vnet
