#include "vnet/greedy.hpp"

#include <cmath>
#include <map>

#include "vnet/steiner.hpp"

namespace vnet {

GreedyReport greedy_baseline(const SubstrateNetwork& net,
                             const std::vector<VNetRequest>& requests, GreedyPolicy policy) {
  GreedyReport report;
  std::map<std::pair<int, long long>, double> load;  // (edge, slot) -> reserved

  for (const auto& req : requests) {
    const auto* agg = std::get_if<AggregateIngressTraffic>(&req.traffic);
    if (!agg || req.routing == RoutingModel::Multipath) {
      ++report.rejected;
      continue;
    }
    const double ingress = agg->ingress;

    std::vector<double> weight(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) {
      double cap = net.edge(e).capacity;
      double peak = 0;
      bool fits = true;
      for (long long t : req.duration) {
        auto it = load.find({e, t});
        double l = it == load.end() ? 0.0 : it->second;
        peak = std::max(peak, l);
        fits = fits && l + ingress <= cap + 1e-9;
      }
      if (!fits) {
        weight[e] = kUnbounded;
      } else {
        weight[e] = policy == GreedyPolicy::UnitWeight ? 1.0 : peak / cap;
      }
    }

    try {
      SteinerTree tree = mst_steiner_2approx(net, weight, req.terminals);
      for (int e : tree.edges) {
        for (long long t : req.duration) load[{e, t}] += ingress;
      }
      ++report.accepted;
      report.benefit += req.benefit;
    } catch (const DisconnectedError&) {
      ++report.rejected;
    }
  }
  return report;
}

}  // namespace vnet
