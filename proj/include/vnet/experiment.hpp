#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "vnet/engine.hpp"
#include "vnet/offline.hpp"

namespace vnet {

enum class EngineMode { Plain, Scaled, Fractional };

std::string to_string(EngineMode m);
EngineMode engine_mode_from_string(const std::string& s);

struct ExperimentConfig {
  std::string substrate_path;
  std::string requests_path;
  EngineMode mode = EngineMode::Plain;
  std::optional<double> scaled_beta;  // Scaled mode; default: a-priori bound
  double floor = 1.0;
  TreeOracleMode tree_oracle = TreeOracleMode::Approx2;
  int hose_edge_budget = 12;
  std::string out_dir;       // empty -> no files emitted
  int opt_edge_budget = 10;  // compute the exact OPT at or below these sizes
  int opt_request_budget = 8;
};

struct RunReport {
  EngineMode mode = EngineMode::Plain;
  int accepted = 0;
  int rejected = 0;
  double benefit = 0;  // dual objective
  double primal = 0;
  double dual = 0;
  double max_congestion = 0;         // vs original capacities
  double max_congestion_scaled = 0;  // vs the capacities the run used
  double capacity_scale = 1;
  BetaBounds bounds;
  double fractional_benefit = 0;            // dual / beta
  std::optional<double> opt_value;          // exact offline optimum, small instances
  std::optional<double> competitive_ratio;  // opt / benefit
  double wall_ms = 0;  // console only; never written to files
  GvopEngine::CongestionReport congestion;  // vs original capacities
};

// Streams the sequence through a fresh engine. When `run_log` is non-null,
// one JSON line per request is emitted (id, decision, gamma, rho, z,
// primal, dual, max congestion).
RunReport run_instance(const SubstrateNetwork& net, const std::vector<VNetRequest>& requests,
                       const ExperimentConfig& cfg, std::ostream* run_log);

// Runs an in-memory instance and writes run.log (JSONL), report.json and
// congestion.csv under cfg.out_dir (no files when out_dir is empty).
RunReport run_and_emit(const SubstrateNetwork& net, const std::vector<VNetRequest>& requests,
                       const ExperimentConfig& cfg);

// File-level driver: loads the instance, then run_and_emit.
RunReport run_experiment(const ExperimentConfig& cfg);

std::string report_to_json(const RunReport& report);
void write_congestion_csv(std::ostream& out, const SubstrateNetwork& net,
                          const GvopEngine::CongestionReport& report);

// Worst-case Theorem-2 style bound computable before the run, from the
// maximum per-edge loads of the sequence; usable as the Corollary-2
// capacity scale. `tree_mode` decides the oracle approximation factor that
// enters the bound.
double apriori_beta(const SubstrateNetwork& net, const std::vector<VNetRequest>& requests,
                    TreeOracleMode tree_mode = TreeOracleMode::Exact);

// The invariant suite behind `vnetpack verify`: replays the sequence with
// exact oracles and checks the engine's laws, plus the offline-optimum
// bracket on small instances.
struct VerificationResult {
  int accepted = 0;
  double benefit = 0;
  double max_accounting_violation = 0;  // primal_inc - 2 * dual_inc
  double lemma1_violation = 0;
  double congestion_excess = 0;
  double covering_violation = 0;  // small instances only
  std::optional<double> opt_value;
  double opt_vs_primal = 0;  // opt - primal (should be <= tolerance)
  double dual_vs_opt = 0;    // dual - opt  (should be <= tolerance)
  bool opt_checked = false;
  bool covering_checked = false;

  bool ok(double tol = 1e-6) const;
};

VerificationResult verify_instance(const SubstrateNetwork& net,
                                   const std::vector<VNetRequest>& requests, double floor = 1.0,
                                   int opt_edge_budget = 10, int opt_request_budget = 8);

}  // namespace vnet
