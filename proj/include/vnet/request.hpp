#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vnet/substrate.hpp"

namespace vnet {

enum class RoutingModel { Multipath, SinglePath, Tree };

std::string to_string(RoutingModel m);
RoutingModel routing_from_string(const std::string& s);

// Fixed demand matrix between ordered terminal pairs (bandwidth units).
struct CustomerPipeTraffic {
  std::map<std::pair<int, int>, double> demands;  // (src,dst) node indices

  double total_demand() const;
};

// Per-terminal ingress/egress caps; any consistent matrix must be served.
struct HoseTraffic {
  struct Bound {
    double in = 0;
    double out = 0;
  };
  std::map<int, Bound> bounds;  // terminal node index -> caps
};

// Total ingress bounded by a single parameter; multicast friendly.
struct AggregateIngressTraffic {
  double ingress = 0;
};

using TrafficSpec = std::variant<CustomerPipeTraffic, HoseTraffic, AggregateIngressTraffic>;

// One online arrival.
struct VNetRequest {
  int id = 0;                        // arrival order, positive
  std::vector<int> terminals;        // node indices, sorted unique, |.| >= 2
  TrafficSpec traffic;
  RoutingModel routing = RoutingModel::Tree;
  double benefit = 1.0;              // total revenue if fully served, >= 1
  std::vector<long long> duration;   // sorted unique time slots, nonempty
  double packet_rate = 0.0;          // aggregate ingress packet rate; 0 = no node rows

  long long start_slot() const { return duration.front(); }
  bool is_terminal(int v) const;
};

// One column of the constraint matrix: what an accepted request reserves.
struct Embedding {
  std::map<int, double> edge_reservation;  // edge index -> bandwidth
  std::map<int, double> node_usage;        // node index -> packet rate
  // Optional multipath audit data: per ordered terminal pair, the path
  // decomposition of its commodity flow as (edge sequence, amount).
  std::map<std::pair<int, int>, std::vector<std::pair<std::vector<int>, double>>> commodity_flows;

  double entry_sum() const;
  bool empty() const { return edge_reservation.empty() && node_usage.empty(); }
};

// Checks every per-request invariant against the network; throws
// ValidationError naming the violated invariant. Deterministic, no side
// effects.
void validate_request(const SubstrateNetwork& net, const VNetRequest& req);

// Also enforces the cross-request invariant: start slots strictly increase
// with arrival order.
void validate_sequence(const SubstrateNetwork& net, const std::vector<VNetRequest>& reqs);

// Upper bound on the bandwidth any valid embedding of `req` could place on
// a single edge (same bound for every edge): the aggregate ingress, the
// worst hose cut, or the whole pipe matrix.
double maximum_possible_load(const VNetRequest& req);

// Request sequence file I/O (JSON array ordered by arrival).
std::vector<VNetRequest> load_requests(const std::string& text, const SubstrateNetwork& net);
std::vector<VNetRequest> load_requests_file(const std::string& path, const SubstrateNetwork& net);
std::string serialize_requests(const std::vector<VNetRequest>& reqs, const SubstrateNetwork& net);

}  // namespace vnet
