#pragma once

#include <cstdint>

#include "vnet/request.hpp"

namespace vnet {

struct PlantedParams {
  int request_count = 20;         // number of VNets to plant
  int terminals_per_request = 2;  // k
  int walk_stride = 4;            // pick a terminal every this many steps
  double ingress = 2.0;           // aggregate ingress of every request
  double benefit_lo = 1.0;        // uniform benefit range, clamped to >= 1
  double benefit_hi = 5.0;
  int max_duration = 1;           // slots per request drawn from [1, max]
  uint64_t seed = 1;
};

// An instance whose offline optimum is known by construction: every request
// is embedded along a random-walk subpath and each edge capacity is set to
// the total planted load crossing it (minimum 1), so all requests fit
// simultaneously and the optimum equals the benefit sum.
struct PlantedInstance {
  SubstrateNetwork net;
  std::vector<VNetRequest> requests;
  double planted_optimum = 0;
};

PlantedInstance generate_planted_instance(const SubstrateNetwork& topology,
                                          const PlantedParams& params);

// Random connected test topology: a random spanning tree plus `extra_edges`
// chords, capacities 1 until planted. Node ids are zero-padded for a stable
// lexicographic order.
SubstrateNetwork random_connected_topology(int nodes, int extra_edges, uint64_t seed);

// Copy of `net` with every edge capacity multiplied by `factor` (>= 1);
// used to prepare instances for the scaled-capacity mode.
SubstrateNetwork inflate_capacities(const SubstrateNetwork& net, double factor);

}  // namespace vnet
