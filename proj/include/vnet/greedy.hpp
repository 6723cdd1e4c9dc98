#pragma once

#include "vnet/request.hpp"

namespace vnet {

// Baseline comparators: embed each tree-routable request on a greedily
// built Steiner tree under the policy's edge weights, rejecting whenever
// capacities would be exceeded.
enum class GreedyPolicy { UnitWeight, LoadRatio };

struct GreedyReport {
  int accepted = 0;
  int rejected = 0;
  double benefit = 0;
};

GreedyReport greedy_baseline(const SubstrateNetwork& net,
                             const std::vector<VNetRequest>& requests, GreedyPolicy policy);

}  // namespace vnet
