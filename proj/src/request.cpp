#include "vnet/request.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vnet {

using nlohmann::json;

std::string to_string(RoutingModel m) {
  switch (m) {
    case RoutingModel::Multipath: return "multipath";
    case RoutingModel::SinglePath: return "single_path";
    case RoutingModel::Tree: return "tree";
  }
  return "?";
}

RoutingModel routing_from_string(const std::string& s) {
  if (s == "multipath") return RoutingModel::Multipath;
  if (s == "single_path") return RoutingModel::SinglePath;
  if (s == "tree") return RoutingModel::Tree;
  throw ParseError("unknown routing model '" + s + "'");
}

double CustomerPipeTraffic::total_demand() const {
  double total = 0;
  for (const auto& [pair, d] : demands) total += d;
  return total;
}

bool VNetRequest::is_terminal(int v) const {
  return std::binary_search(terminals.begin(), terminals.end(), v);
}

double Embedding::entry_sum() const {
  double s = 0;
  for (const auto& [e, r] : edge_reservation) s += r;
  for (const auto& [v, r] : node_usage) s += r;
  return s;
}

namespace {

void fail(const std::string& what) { throw ValidationError(what); }

std::string req_tag(const VNetRequest& req) {
  return "request " + std::to_string(req.id) + ": ";
}

}  // namespace

void validate_request(const SubstrateNetwork& net, const VNetRequest& req) {
  if (req.id <= 0) fail(req_tag(req) + "id must be positive");
  if (req.terminals.size() < 2) fail(req_tag(req) + "needs at least 2 terminals");
  if (!std::is_sorted(req.terminals.begin(), req.terminals.end()) ||
      std::adjacent_find(req.terminals.begin(), req.terminals.end()) != req.terminals.end()) {
    fail(req_tag(req) + "terminals must be sorted and distinct");
  }
  for (int t : req.terminals) {
    if (t < 0 || t >= net.node_count()) fail(req_tag(req) + "terminal not in substrate");
  }
  if (!(req.benefit >= 1.0)) fail(req_tag(req) + "benefit below 1");
  if (req.duration.empty()) fail(req_tag(req) + "empty duration");
  if (!std::is_sorted(req.duration.begin(), req.duration.end()) ||
      std::adjacent_find(req.duration.begin(), req.duration.end()) != req.duration.end()) {
    fail(req_tag(req) + "duration slots must be sorted and distinct");
  }
  if (!(req.packet_rate >= 0.0)) fail(req_tag(req) + "negative packet rate");

  if (const auto* cp = std::get_if<CustomerPipeTraffic>(&req.traffic)) {
    double total = 0;
    for (const auto& [pair, d] : cp->demands) {
      if (!req.is_terminal(pair.first) || !req.is_terminal(pair.second)) {
        fail(req_tag(req) + "pipe demand between non-terminals");
      }
      if (pair.first == pair.second && d != 0.0) {
        fail(req_tag(req) + "nonzero diagonal pipe demand");
      }
      if (!(d >= 0.0)) fail(req_tag(req) + "negative pipe demand");
      total += d;
    }
    if (total <= 0.0) fail(req_tag(req) + "all-zero pipe matrix");
  } else if (const auto* hose = std::get_if<HoseTraffic>(&req.traffic)) {
    if (hose->bounds.size() != req.terminals.size()) {
      fail(req_tag(req) + "hose bounds must cover exactly the terminals");
    }
    for (const auto& [t, b] : hose->bounds) {
      if (!req.is_terminal(t)) fail(req_tag(req) + "hose bound on non-terminal");
      if (!(b.in >= 1.0) || !(b.out >= 1.0)) {
        fail(req_tag(req) + "hose ingress/egress bound below 1");
      }
    }
  } else {
    const auto& agg = std::get<AggregateIngressTraffic>(req.traffic);
    if (!(agg.ingress >= 1.0)) fail(req_tag(req) + "aggregate ingress below 1");
  }
}

void validate_sequence(const SubstrateNetwork& net, const std::vector<VNetRequest>& reqs) {
  long long prev_start = 0;
  bool first = true;
  for (const auto& req : reqs) {
    validate_request(net, req);
    if (!first && req.start_slot() <= prev_start) {
      fail(req_tag(req) + "start slot must exceed the previous request's");
    }
    prev_start = req.start_slot();
    first = false;
  }
}

double maximum_possible_load(const VNetRequest& req) {
  if (const auto* agg = std::get_if<AggregateIngressTraffic>(&req.traffic)) {
    return agg->ingress;
  }
  if (const auto* cp = std::get_if<CustomerPipeTraffic>(&req.traffic)) {
    return cp->total_demand();
  }
  // Hose: worst cut over all bipartitions (A,B) of the terminal set of
  //   min(sum_A out, sum_B in) + min(sum_A in, sum_B out).
  const auto& hose = std::get<HoseTraffic>(req.traffic);
  const int k = static_cast<int>(req.terminals.size());
  double worst = 0;
  for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
    double a_out = 0, a_in = 0, b_out = 0, b_in = 0;
    for (int i = 0; i < k; ++i) {
      const auto& b = hose.bounds.at(req.terminals[i]);
      if (mask & (1u << i)) {
        a_out += b.out;
        a_in += b.in;
      } else {
        b_out += b.out;
        b_in += b.in;
      }
    }
    worst = std::max(worst, std::min(a_out, b_in) + std::min(a_in, b_out));
  }
  return worst;
}

// --------------------------------------------------------------------------
// JSON I/O

namespace {

json traffic_to_json(const TrafficSpec& traffic, const SubstrateNetwork& net) {
  if (const auto* cp = std::get_if<CustomerPipeTraffic>(&traffic)) {
    json demands = json::array();
    for (const auto& [pair, d] : cp->demands) {
      demands.push_back({{"src", net.node_id(pair.first)},
                         {"dst", net.node_id(pair.second)},
                         {"amount", d}});
    }
    return json{{"model", "customer_pipe"}, {"demands", std::move(demands)}};
  }
  if (const auto* hose = std::get_if<HoseTraffic>(&traffic)) {
    json bounds = json::array();
    for (const auto& [t, b] : hose->bounds) {
      bounds.push_back({{"terminal", net.node_id(t)}, {"in", b.in}, {"out", b.out}});
    }
    return json{{"model", "hose"}, {"bounds", std::move(bounds)}};
  }
  const auto& agg = std::get<AggregateIngressTraffic>(traffic);
  return json{{"model", "aggregate_ingress"}, {"ingress", agg.ingress}};
}

TrafficSpec traffic_from_json(const json& t, const SubstrateNetwork& net) {
  const std::string model = t.at("model").get<std::string>();
  if (model == "customer_pipe") {
    CustomerPipeTraffic cp;
    for (const auto& d : t.at("demands")) {
      int s = net.require_node(d.at("src").get<std::string>());
      int r = net.require_node(d.at("dst").get<std::string>());
      cp.demands[{s, r}] += d.at("amount").get<double>();
    }
    return cp;
  }
  if (model == "hose") {
    HoseTraffic hose;
    for (const auto& b : t.at("bounds")) {
      int v = net.require_node(b.at("terminal").get<std::string>());
      hose.bounds[v] = {b.at("in").get<double>(), b.at("out").get<double>()};
    }
    return hose;
  }
  if (model == "aggregate_ingress") {
    return AggregateIngressTraffic{t.at("ingress").get<double>()};
  }
  throw ParseError("unknown traffic model '" + model + "'");
}

}  // namespace

std::vector<VNetRequest> load_requests(const std::string& text, const SubstrateNetwork& net) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("requests: ") + ex.what());
  }
  if (!doc.is_array()) throw ParseError("requests: expected a JSON array");
  std::vector<VNetRequest> reqs;
  try {
    for (const auto& r : doc) {
      VNetRequest req;
      req.id = r.at("id").get<int>();
      for (const auto& t : r.at("terminals")) {
        req.terminals.push_back(net.require_node(t.get<std::string>()));
      }
      std::sort(req.terminals.begin(), req.terminals.end());
      req.traffic = traffic_from_json(r.at("traffic"), net);
      req.routing = routing_from_string(r.at("routing").get<std::string>());
      req.benefit = r.at("benefit").get<double>();
      for (const auto& s : r.at("duration")) req.duration.push_back(s.get<long long>());
      std::sort(req.duration.begin(), req.duration.end());
      req.duration.erase(std::unique(req.duration.begin(), req.duration.end()),
                         req.duration.end());
      req.packet_rate = r.value("packet_rate", 0.0);
      reqs.push_back(std::move(req));
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("requests: ") + ex.what());
  }
  validate_sequence(net, reqs);
  return reqs;
}

std::vector<VNetRequest> load_requests_file(const std::string& path, const SubstrateNetwork& net) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_requests(buf.str(), net);
}

std::string serialize_requests(const std::vector<VNetRequest>& reqs, const SubstrateNetwork& net) {
  json arr = json::array();
  for (const auto& req : reqs) {
    json terminals = json::array();
    for (int t : req.terminals) terminals.push_back(net.node_id(t));
    json r{{"id", req.id},
           {"terminals", std::move(terminals)},
           {"traffic", traffic_to_json(req.traffic, net)},
           {"routing", to_string(req.routing)},
           {"benefit", req.benefit},
           {"duration", req.duration}};
    if (req.packet_rate != 0.0) r["packet_rate"] = req.packet_rate;
    arr.push_back(std::move(r));
  }
  return arr.dump(2) + "\n";
}

}  // namespace vnet
