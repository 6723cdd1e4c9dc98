#include "vnet/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace vnet {

namespace {
constexpr double kAccountingEps = 1e-9;
}

std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::PriceTooHigh: return "price_too_high";
    case RejectReason::Infeasible: return "infeasible";
    case RejectReason::UnsupportedModel: return "unsupported_model";
  }
  return "?";
}

EffectivePrices effective_prices(const PriceState& state, const SubstrateNetwork& net,
                                 const VNetRequest& req) {
  EffectivePrices prices = EffectivePrices::zero(net);
  for (long long t : req.duration) {
    for (int e = 0; e < net.edge_count(); ++e) {
      prices.edge[e] += state.price({false, e, t});
    }
    for (int v = 0; v < net.node_count(); ++v) {
      prices.node[v] += state.price({true, v, t});
    }
  }
  return prices;
}

double column_weight(const Embedding& emb, size_t duration_len) {
  double per_slot = emb.entry_sum();
  if (per_slot <= 0 || duration_len == 0) {
    throw ValidationError("zero column: embedding must reserve something");
  }
  return static_cast<double>(duration_len) * per_slot;
}

GvopEngine::GvopEngine(const SubstrateNetwork& net, EngineConfig cfg)
    : net_(net), cfg_(cfg) {
  st_.min_load_floor = cfg_.oracle.min_load_floor;
  scaled_edge_cap_ = net.edge_capacities();
  scaled_node_cap_ = net.node_capacities();
}

void GvopEngine::configure_scaled_capacities(double beta) {
  if (processed_ > 0) {
    throw ValidationError("scaled capacities must be configured before any request");
  }
  if (!(beta >= 1.0)) {
    throw ValidationError("capacity scale must be >= 1");
  }
  st_.capacity_scale = beta;
  for (double& c : scaled_edge_cap_) c /= beta;
  for (double& c : scaled_node_cap_) c /= beta;  // unbounded stays unbounded
}

double GvopEngine::scaled_capacity(const ResourceSlotKey& key) const {
  return key.is_node ? scaled_node_cap_[key.index] : scaled_edge_cap_[key.index];
}

Decision GvopEngine::reject(RejectReason reason, std::string detail, double gamma,
                            double rho) const {
  Decision d;
  d.accepted = false;
  d.reason = reason;
  d.detail = std::move(detail);
  d.gamma = gamma;
  d.rho = rho;
  return d;
}

Decision GvopEngine::process_request(const VNetRequest& req) {
  validate_request(net_, req);
  if (processed_ > 0 && req.start_slot() <= last_start_) {
    throw ValidationError("request " + std::to_string(req.id) +
                          ": arrival order violated (start slot not increasing)");
  }
  ++processed_;
  last_start_ = req.start_slot();

  EffectivePrices prices = effective_prices(st_, net_, req);
  auto outcome =
      dispatch_oracle(net_, scaled_edge_cap_, scaled_node_cap_, prices, req, cfg_.oracle);
  if (!outcome) {
    return reject(RejectReason::UnsupportedModel,
                  to_string(req.routing) + " routing not supported for this traffic model", 0, 1);
  }
  if (!outcome->result) {
    return reject(RejectReason::Infeasible, to_string(outcome->reject), 0, 1);
  }
  floor_reroute_seen_ = floor_reroute_seen_ || outcome->floor_reroute_used;

  const OracleResult& res = *outcome->result;
  const double gamma = res.gamma;
  const double rho = res.rho;
  if (!(gamma < rho * req.benefit)) {
    // Step 3: reject; X, Z, Y stay untouched.
    return reject(RejectReason::PriceTooHigh, "", gamma, rho);
  }

  // Step 2: accept. Oracles must only return columns that fit the (scaled)
  // capacities and the load floor; anything else is a bug, not bad input.
  const Embedding& emb = res.embedding;
  auto check_entry = [&](double amount, double cap, const std::string& what) {
    if (amount > cap + kAccountingEps) {
      throw std::logic_error("oracle returned an infeasible embedding on " + what);
    }
    if (amount < cfg_.oracle.min_load_floor - kAccountingEps) {
      throw std::logic_error("oracle returned a sub-floor entry on " + what);
    }
  };
  for (const auto& [e, a] : emb.edge_reservation) {
    check_entry(a, scaled_edge_cap_[e], "edge " + net_.edge_name(e));
  }
  for (const auto& [v, a] : emb.node_usage) {
    check_entry(a, scaled_node_cap_[v], "node " + net_.node_id(v));
  }

  const double w = column_weight(emb, req.duration.size());
  const double z = rho * req.benefit - gamma / rho;

  // Multiplicative price update on every touched (resource, slot) row.
  // Rows on unbounded resources do not exist in the matrix: the exponent
  // would be zero and the price pinned at zero, so they are skipped.
  auto bump = [&](const ResourceSlotKey& key, double amount) {
    loads_[key] += amount;
    double cap = scaled_capacity(key);
    if (std::isinf(cap)) return;
    double factor = std::exp2(amount / cap);
    double& price = st_.x[key];
    double before = price;
    price = price * factor + (factor - 1.0) / w;
    st_.primal += (price - before) * cap;
  };
  for (long long t : req.duration) {
    for (const auto& [e, a] : emb.edge_reservation) bump({false, e, t}, a);
    for (const auto& [v, a] : emb.node_usage) bump({true, v, t}, a);
  }

  st_.z[req.id] = z;
  st_.primal += z;
  st_.dual += req.benefit;
  st_.max_column_weight = std::max(st_.max_column_weight, w);
  st_.max_slot_weight = std::max(st_.max_slot_weight, emb.entry_sum());
  st_.max_benefit = std::max(st_.max_benefit, req.benefit);
  st_.max_duration_len =
      std::max(st_.max_duration_len, static_cast<long long>(req.duration.size()));
  st_.max_rho = std::max(st_.max_rho, rho);

  AcceptanceRecord rec;
  rec.embedding = emb;
  rec.duration = req.duration;
  rec.gamma = gamma;
  rec.rho = rho;
  rec.z = z;
  rec.benefit = req.benefit;
  rec.column_weight = w;
  st_.accepted[req.id] = std::move(rec);

  Decision d;
  d.accepted = true;
  d.gamma = gamma;
  d.rho = rho;
  d.z = z;
  d.embedding = emb;
  return d;
}

BetaBounds GvopEngine::theoretical_beta() const {
  if (processed_ == 0) {
    throw std::logic_error("theoretical_beta: no request processed yet");
  }
  BetaBounds b;
  b.beta = std::log2(1.0 + 3.0 * st_.max_column_weight * st_.max_benefit);
  b.beta_prime = std::log2(1.0 + 3.0 * static_cast<double>(st_.max_duration_len) *
                                     st_.max_slot_weight * st_.max_benefit);
  b.beta_rho = st_.max_rho *
               std::log2(1.0 + 3.0 * st_.max_rho * st_.max_column_weight * st_.max_benefit);
  return b;
}

std::map<int, double> GvopEngine::fractional_solution() const {
  std::map<int, double> out;
  if (st_.accepted.empty()) return out;
  double beta = theoretical_beta().beta;
  for (const auto& [id, rec] : st_.accepted) out[id] = 1.0 / beta;
  return out;
}

GvopEngine::CongestionReport GvopEngine::congestion_report(CapacityBasis basis) const {
  CongestionReport report;
  for (const auto& [key, load] : loads_) {
    double cap = basis == CapacityBasis::Scaled
                     ? scaled_capacity(key)
                     : (key.is_node ? net_.node_capacity(key.index)
                                    : net_.edge(key.index).capacity);
    double ratio = std::isinf(cap) ? 0.0 : load / cap;
    report.entries[key] = {load, cap, ratio};
    report.max_ratio = std::max(report.max_ratio, ratio);
  }
  return report;
}

double GvopEngine::max_congestion(CapacityBasis basis) const {
  double worst = 0;
  for (const auto& [key, load] : loads_) {
    double cap = basis == CapacityBasis::Scaled
                     ? scaled_capacity(key)
                     : (key.is_node ? net_.node_capacity(key.index)
                                    : net_.edge(key.index).capacity);
    if (!std::isinf(cap)) worst = std::max(worst, load / cap);
  }
  return worst;
}

double GvopEngine::lemma1_max_violation() const {
  if (st_.max_column_weight <= 0) return 0;
  double worst = -kUnbounded;
  for (const auto& [key, load] : loads_) {
    double cap = scaled_capacity(key);
    if (std::isinf(cap)) continue;
    double bound = (std::exp2(load / cap) - 1.0) / st_.max_column_weight;
    worst = std::max(worst, bound - st_.price(key));
  }
  return worst == -kUnbounded ? 0 : worst;
}

double GvopEngine::congestion_law_max_excess(double bound) const {
  double worst = -kUnbounded;
  for (const auto& [key, load] : loads_) {
    double cap = scaled_capacity(key);
    if (std::isinf(cap)) continue;
    worst = std::max(worst, load - bound * cap);
  }
  return worst == -kUnbounded ? 0 : worst;
}

}  // namespace vnet
