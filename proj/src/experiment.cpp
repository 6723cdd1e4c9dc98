#include "vnet/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace vnet {

using nlohmann::json;

std::string to_string(EngineMode m) {
  switch (m) {
    case EngineMode::Plain: return "plain";
    case EngineMode::Scaled: return "scaled";
    case EngineMode::Fractional: return "fractional";
  }
  return "?";
}

EngineMode engine_mode_from_string(const std::string& s) {
  if (s == "plain") return EngineMode::Plain;
  if (s == "scaled") return EngineMode::Scaled;
  if (s == "fractional") return EngineMode::Fractional;
  throw ParseError("unknown engine mode '" + s + "'");
}

double apriori_beta(const SubstrateNetwork& net, const std::vector<VNetRequest>& requests,
                    TreeOracleMode tree_mode) {
  double max_w = 0, max_b = 1, max_rho = 1;
  const double n = net.node_count();
  for (const auto& req : requests) {
    // Any embedding touches at most n-1 edges at the per-edge load cap and
    // at most n nodes at the packet rate.
    double w = static_cast<double>(req.duration.size()) *
               ((n - 1) * maximum_possible_load(req) + n * req.packet_rate);
    max_w = std::max(max_w, w);
    max_b = std::max(max_b, req.benefit);
    double rho = 1;
    if (std::holds_alternative<AggregateIngressTraffic>(req.traffic) &&
        tree_mode == TreeOracleMode::Approx2) {
      rho = req.packet_rate > 0 ? 2.0 * std::log(static_cast<double>(req.terminals.size()))
                                : 2.0;
      rho = std::max(1.0, rho);
    }
    max_rho = std::max(max_rho, rho);
  }
  return std::max(1.0, max_rho * std::log2(1.0 + 3.0 * max_rho * max_w * max_b));
}

RunReport run_instance(const SubstrateNetwork& net, const std::vector<VNetRequest>& requests,
                       const ExperimentConfig& cfg, std::ostream* run_log) {
  EngineConfig engine_cfg;
  engine_cfg.oracle.min_load_floor = cfg.floor;
  engine_cfg.oracle.tree_mode = cfg.tree_oracle;
  engine_cfg.oracle.hose_edge_budget = cfg.hose_edge_budget;
  GvopEngine engine(net, engine_cfg);

  RunReport report;
  report.mode = cfg.mode;
  if (cfg.mode == EngineMode::Scaled) {
    double beta = cfg.scaled_beta ? *cfg.scaled_beta : apriori_beta(net, requests, cfg.tree_oracle);
    engine.configure_scaled_capacities(beta);
    report.capacity_scale = beta;
  }

  for (const auto& req : requests) {
    Decision d = engine.process_request(req);
    if (d.accepted) {
      ++report.accepted;
    } else {
      ++report.rejected;
    }
    if (run_log) {
      json line{{"id", req.id},
                {"decision", d.accepted ? "accepted" : "rejected"},
                {"gamma", d.gamma},
                {"rho", d.rho},
                {"z", d.z},
                {"primal", engine.primal_value()},
                {"dual", engine.dual_value()},
                {"max_congestion", engine.max_congestion(GvopEngine::CapacityBasis::Original)}};
      if (!d.accepted) {
        line["reason"] = to_string(d.reason);
        if (!d.detail.empty()) line["detail"] = d.detail;
      }
      *run_log << line.dump() << "\n";
    }
  }

  report.benefit = engine.dual_value();
  report.primal = engine.primal_value();
  report.dual = engine.dual_value();
  report.max_congestion = engine.max_congestion(GvopEngine::CapacityBasis::Original);
  report.max_congestion_scaled = engine.max_congestion(GvopEngine::CapacityBasis::Scaled);
  if (engine.processed_count() > 0) report.bounds = engine.theoretical_beta();
  if (report.accepted > 0 && report.bounds.beta > 0) {
    report.fractional_benefit = report.dual / report.bounds.beta;
  }

  report.congestion = engine.congestion_report(GvopEngine::CapacityBasis::Original);

  if (net.edge_count() <= cfg.opt_edge_budget &&
      static_cast<int>(requests.size()) <= cfg.opt_request_budget) {
    auto opt = offline_fractional_opt(net, requests, cfg.opt_edge_budget);
    if (!opt.truncated) {
      report.opt_value = opt.value;
      if (report.benefit > 0) report.competitive_ratio = opt.value / report.benefit;
    }
  }
  return report;
}

std::string report_to_json(const RunReport& report) {
  json doc{{"mode", to_string(report.mode)},
           {"accepted", report.accepted},
           {"rejected", report.rejected},
           {"benefit", report.benefit},
           {"primal", report.primal},
           {"dual", report.dual},
           {"max_congestion", report.max_congestion},
           {"max_congestion_scaled", report.max_congestion_scaled},
           {"capacity_scale", report.capacity_scale},
           {"beta", report.bounds.beta},
           {"beta_prime", report.bounds.beta_prime},
           {"beta_rho", report.bounds.beta_rho},
           {"fractional_benefit", report.fractional_benefit}};
  if (report.opt_value) doc["opt_value"] = *report.opt_value;
  if (report.competitive_ratio) doc["competitive_ratio"] = *report.competitive_ratio;
  return doc.dump(2) + "\n";
}

void write_congestion_csv(std::ostream& out, const SubstrateNetwork& net,
                          const GvopEngine::CongestionReport& report) {
  out << "resource_kind,resource,slot,load,capacity,congestion\n";
  for (const auto& [key, entry] : report.entries) {
    out << (key.is_node ? "node" : "edge") << ","
        << (key.is_node ? net.node_id(key.index) : net.edge_name(key.index)) << "," << key.slot
        << "," << entry.load << ","
        << (std::isinf(entry.capacity) ? std::string("inf") : std::to_string(entry.capacity))
        << "," << entry.ratio << "\n";
  }
}

RunReport run_and_emit(const SubstrateNetwork& net, const std::vector<VNetRequest>& requests,
                       const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport report;
  if (cfg.out_dir.empty()) {
    report = run_instance(net, requests, cfg, nullptr);
  } else {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream log_file(cfg.out_dir + "/run.log");
    report = run_instance(net, requests, cfg, &log_file);
    std::ofstream report_file(cfg.out_dir + "/report.json");
    report_file << report_to_json(report);
    std::ofstream csv(cfg.out_dir + "/congestion.csv");
    write_congestion_csv(csv, net, report.congestion);
  }
  auto t1 = std::chrono::steady_clock::now();
  report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return report;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  SubstrateNetwork net = load_substrate_file(cfg.substrate_path);
  std::vector<VNetRequest> requests = load_requests_file(cfg.requests_path, net);
  return run_and_emit(net, requests, cfg);
}

bool VerificationResult::ok(double tol) const {
  bool laws = max_accounting_violation <= tol && lemma1_violation <= tol &&
              congestion_excess <= tol;
  if (covering_checked) laws = laws && covering_violation <= tol;
  if (opt_checked) laws = laws && opt_vs_primal <= tol && dual_vs_opt <= tol;
  return laws;
}

VerificationResult verify_instance(const SubstrateNetwork& net,
                                   const std::vector<VNetRequest>& requests, double floor,
                                   int opt_edge_budget, int opt_request_budget) {
  EngineConfig cfg;
  cfg.oracle.tree_mode = TreeOracleMode::Exact;
  cfg.oracle.min_load_floor = floor;
  GvopEngine engine(net, cfg);

  VerificationResult result;
  double prev_primal = 0, prev_dual = 0;
  for (const auto& req : requests) {
    Decision d = engine.process_request(req);
    if (d.accepted) ++result.accepted;
    double primal_inc = engine.primal_value() - prev_primal;
    double dual_inc = engine.dual_value() - prev_dual;
    prev_primal = engine.primal_value();
    prev_dual = engine.dual_value();
    result.max_accounting_violation =
        std::max(result.max_accounting_violation, primal_inc - 2.0 * dual_inc);
    result.lemma1_violation = std::max(result.lemma1_violation, engine.lemma1_max_violation());
  }
  result.benefit = engine.dual_value();

  // Congestion law with the floor-adjusted constant: 3 at floor 1, 1 + 2/f
  // below it.
  const auto& st = engine.state();
  double constant = 1.0 + 2.0 / std::min(1.0, floor);
  double bound = std::log2(1.0 + constant * st.max_column_weight * st.max_benefit);
  result.congestion_excess = engine.congestion_law_max_excess(bound);

  if (net.edge_count() <= opt_edge_budget &&
      static_cast<int>(requests.size()) <= opt_request_budget) {
    result.covering_violation = max_covering_violation(net, requests, st, opt_edge_budget);
    result.covering_checked = true;
    auto opt = offline_fractional_opt(net, requests, opt_edge_budget);
    if (!opt.truncated) {
      result.opt_value = opt.value;
      result.opt_vs_primal = opt.value - engine.primal_value();
      result.dual_vs_opt = engine.dual_value() - opt.value;
      result.opt_checked = true;
    }
  }
  return result;
}

}  // namespace vnet
