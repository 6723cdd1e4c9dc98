#pragma once

#include <map>
#include <string>

#include "vnet/oracle.hpp"

namespace vnet {

// One row of the time-expanded constraint matrix.
struct ResourceSlotKey {
  bool is_node = false;  // false -> edge resource
  int index = 0;
  long long slot = 0;

  auto operator<=>(const ResourceSlotKey&) const = default;
};

struct AcceptanceRecord {
  Embedding embedding;
  std::vector<long long> duration;
  double gamma = 0;
  double rho = 1;
  double z = 0;
  double benefit = 0;
  double column_weight = 0;  // |T| factor included
};

// The covering solution, lazily materialized: only touched (resource, slot)
// prices exist, everything else reads as zero.
struct PriceState {
  std::map<ResourceSlotKey, double> x;
  std::map<int, double> z;                  // request id -> z_j (accepted only)
  std::map<int, AcceptanceRecord> accepted; // request id -> column with y = 1
  double capacity_scale = 1.0;              // 1 = plain mode
  double min_load_floor = 1.0;
  double primal = 0;                        // X^T C + sum z
  double dual = 0;                          // sum of accepted benefits
  double max_column_weight = 0;             // W_obs over accepted columns
  double max_slot_weight = 0;               // W_obs without the |T| factor
  double max_benefit = 0;                   // B_obs over accepted requests
  long long max_duration_len = 0;           // T_max observed
  double max_rho = 1.0;

  double price(const ResourceSlotKey& key) const {
    auto it = x.find(key);
    return it == x.end() ? 0.0 : it->second;
  }
};

enum class RejectReason { PriceTooHigh, Infeasible, UnsupportedModel };
std::string to_string(RejectReason r);

struct Decision {
  bool accepted = false;
  RejectReason reason = RejectReason::Infeasible;
  std::string detail;  // oracle-level cause when rejected as infeasible
  double gamma = 0;
  double rho = 1;
  double z = 0;
  Embedding embedding;  // populated on acceptance
};

struct BetaBounds {
  double beta = 0;        // log2(1 + 3 W B)
  double beta_prime = 0;  // log2(1 + 3 T_max W_slot B)
  double beta_rho = 0;    // rho log2(1 + 3 rho W B)
};

struct EngineConfig {
  OracleConfig oracle;
};

// Duration-aggregated prices for one request, read off a covering state.
EffectivePrices effective_prices(const PriceState& state, const SubstrateNetwork& net,
                                 const VNetRequest& req);

// |T| * (sum of reservations + usages); throws ValidationError on a zero
// column.
double column_weight(const Embedding& emb, size_t duration_len);

// The online primal-dual admission engine. process_request must be called
// serially in arrival order; distinct engines share nothing.
class GvopEngine {
 public:
  explicit GvopEngine(const SubstrateNetwork& net, EngineConfig cfg = {});

  // Corollary-2 mode: all feasibility checks and price updates run against
  // capacities divided by `beta`. Must be called before any request.
  void configure_scaled_capacities(double beta);

  Decision process_request(const VNetRequest& req);

  double primal_value() const { return st_.primal; }
  double dual_value() const { return st_.dual; }

  BetaBounds theoretical_beta() const;

  // Corollary-1 view of the run: every accepted request served to 1/beta.
  std::map<int, double> fractional_solution() const;

  enum class CapacityBasis { Original, Scaled };

  struct CongestionEntry {
    double load = 0;
    double capacity = 0;
    double ratio = 0;
  };
  struct CongestionReport {
    std::map<ResourceSlotKey, CongestionEntry> entries;
    double max_ratio = 0;
  };
  CongestionReport congestion_report(CapacityBasis basis = CapacityBasis::Original) const;
  double max_congestion(CapacityBasis basis = CapacityBasis::Original) const;

  const PriceState& state() const { return st_; }
  const SubstrateNetwork& net() const { return net_; }
  const std::map<ResourceSlotKey, double>& loads() const { return loads_; }
  int processed_count() const { return processed_; }
  bool floor_reroute_seen() const { return floor_reroute_seen_; }

  double scaled_capacity(const ResourceSlotKey& key) const;
  EffectivePrices prices_for(const VNetRequest& req) const {
    return effective_prices(st_, net_, req);
  }

  // Verification hooks (scaled capacities, i.e. the matrix the run used).
  // Largest violation of x >= (1/W)(2^{load/c} - 1); <= 0 when the law holds.
  double lemma1_max_violation() const;
  // Largest load - bound * c over finite-capacity rows.
  double congestion_law_max_excess(double bound) const;

 private:
  Decision reject(RejectReason reason, std::string detail, double gamma, double rho) const;

  const SubstrateNetwork& net_;
  EngineConfig cfg_;
  PriceState st_;
  std::vector<double> scaled_edge_cap_;
  std::vector<double> scaled_node_cap_;
  std::map<ResourceSlotKey, double> loads_;  // derived, accepted columns only
  int processed_ = 0;
  long long last_start_ = 0;
  bool floor_reroute_seen_ = false;
};

}  // namespace vnet
