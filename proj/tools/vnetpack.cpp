#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vnet/experiment.hpp"
#include "vnet/greedy.hpp"
#include "vnet/planted.hpp"

namespace {

struct GenOptions {
  std::string topology_path;
  std::string out_dir = ".";
  vnet::PlantedParams params;
};

vnet::PlantedInstance generate(const GenOptions& opt) {
  vnet::SubstrateNetwork topology = vnet::load_topology_file(opt.topology_path);
  return vnet::generate_planted_instance(topology, opt.params);
}

void add_gen_flags(CLI::App* cmd, GenOptions& opt) {
  cmd->add_option("--topology", opt.topology_path, "Topology file (instance JSON or edge list)")
      ->required();
  cmd->add_option("--seed", opt.params.seed, "Generator seed");
  cmd->add_option("--count", opt.params.request_count, "Number of requests to plant");
  cmd->add_option("--terminals", opt.params.terminals_per_request, "Terminals per request");
  cmd->add_option("--stride", opt.params.walk_stride, "Walk steps between terminal picks");
  cmd->add_option("--ingress", opt.params.ingress, "Aggregate ingress per request");
  cmd->add_option("--benefit-lo", opt.params.benefit_lo, "Benefit range lower end");
  cmd->add_option("--benefit-hi", opt.params.benefit_hi, "Benefit range upper end");
  cmd->add_option("--max-duration", opt.params.max_duration, "Max slots per request");
}

void print_report(const vnet::RunReport& report) {
  std::cout << "mode: " << vnet::to_string(report.mode) << "\n"
            << "accepted: " << report.accepted << "  rejected: " << report.rejected << "\n"
            << "benefit: " << report.benefit << "  primal: " << report.primal
            << "  dual: " << report.dual << "\n"
            << "max congestion (original capacities): " << report.max_congestion << "\n"
            << "beta: " << report.bounds.beta << "  beta': " << report.bounds.beta_prime
            << "  beta_rho: " << report.bounds.beta_rho << "\n";
  if (report.mode == vnet::EngineMode::Scaled) {
    std::cout << "capacity scale: " << report.capacity_scale
              << "  max congestion vs scaled: " << report.max_congestion_scaled << "\n";
  }
  if (report.mode == vnet::EngineMode::Fractional) {
    std::cout << "fractional benefit (dual/beta): " << report.fractional_benefit << "\n";
  }
  if (report.opt_value) {
    std::cout << "offline OPT: " << *report.opt_value;
    if (report.competitive_ratio) std::cout << "  empirical ratio: " << *report.competitive_ratio;
    std::cout << "\n";
  }
  std::cout << "wall: " << report.wall_ms << " ms\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online virtual-network packing engine"};
  app.require_subcommand(1);

  // run
  vnet::ExperimentConfig cfg;
  std::string mode_str = "plain";
  std::string oracle_str = "approx";
  double beta_flag = 0;
  GenOptions run_gen;
  bool use_generator = false;
  auto* run = app.add_subcommand("run", "Process a request sequence and emit reports");
  run->add_option("--substrate", cfg.substrate_path, "Substrate instance file");
  run->add_option("--requests", cfg.requests_path, "Request sequence file");
  run->add_flag("--generate", use_generator, "Generate a planted instance instead of loading");
  add_gen_flags(run, run_gen);
  run->get_option("--topology")->required(false);
  run->add_option("--mode", mode_str, "plain | scaled | fractional");
  run->add_option("--beta", beta_flag, "Capacity scale for scaled mode (default: a-priori bound)");
  run->add_option("--floor", cfg.floor, "Minimum nonzero load per resource (1 down to 1/N^2)");
  run->add_option("--oracle", oracle_str, "Tree oracle: approx (2-approx) | exact");
  run->add_option("--out", cfg.out_dir, "Output directory (run.log, report.json, congestion.csv)");
  run->add_option("--opt-edges", cfg.opt_edge_budget, "Edge cap for exact OPT computation");
  run->add_option("--opt-requests", cfg.opt_request_budget, "Request cap for exact OPT");

  // verify
  std::string v_substrate, v_requests;
  double v_floor = 1.0;
  auto* verify = app.add_subcommand("verify", "Replay with exact oracles and check the laws");
  verify->add_option("--substrate", v_substrate)->required();
  verify->add_option("--requests", v_requests)->required();
  verify->add_option("--floor", v_floor);

  // gen
  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "Emit a planted instance");
  add_gen_flags(gen, gen_opt);
  gen->add_option("--out", gen_opt.out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      cfg.mode = vnet::engine_mode_from_string(mode_str);
      cfg.tree_oracle = oracle_str == "exact" ? vnet::TreeOracleMode::Exact
                                              : vnet::TreeOracleMode::Approx2;
      if (beta_flag > 0) cfg.scaled_beta = beta_flag;

      vnet::RunReport report;
      if (use_generator) {
        auto inst = generate(run_gen);
        if (!cfg.out_dir.empty()) {
          std::filesystem::create_directories(cfg.out_dir);
          std::ofstream sub(cfg.out_dir + "/substrate.json");
          sub << vnet::serialize_substrate(inst.net);
          std::ofstream reqs(cfg.out_dir + "/requests.json");
          reqs << vnet::serialize_requests(inst.requests, inst.net);
        }
        report = vnet::run_and_emit(inst.net, inst.requests, cfg);
        std::cout << "planted optimum: " << inst.planted_optimum << "\n";
      } else {
        if (cfg.substrate_path.empty() || cfg.requests_path.empty()) {
          std::cerr << "run: need --substrate and --requests (or --generate --topology)\n";
          return 2;
        }
        report = vnet::run_experiment(cfg);
      }
      print_report(report);
      return 0;
    }

    if (verify->parsed()) {
      auto net = vnet::load_substrate_file(v_substrate);
      auto requests = vnet::load_requests_file(v_requests, net);
      auto result = vnet::verify_instance(net, requests, v_floor);
      auto line = [](const std::string& name, bool ok, double value) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " (worst " << value << ")\n";
      };
      constexpr double kTol = 1e-6;
      line("primal-dual accounting", result.max_accounting_violation <= kTol,
           result.max_accounting_violation);
      line("price lower-bound law", result.lemma1_violation <= kTol, result.lemma1_violation);
      line("congestion law", result.congestion_excess <= kTol, result.congestion_excess);
      if (result.covering_checked) {
        line("covering feasibility", result.covering_violation <= kTol,
             result.covering_violation);
      }
      if (result.opt_checked) {
        line("OPT <= primal", result.opt_vs_primal <= kTol, result.opt_vs_primal);
        line("benefit <= OPT", result.dual_vs_opt <= kTol, result.dual_vs_opt);
        std::cout << "OPT " << *result.opt_value << ", benefit " << result.benefit << "\n";
      } else {
        std::cout << "instance too large for the exact OPT bracket; laws only\n";
      }
      return result.ok(kTol) ? 0 : 1;
    }

    if (gen->parsed()) {
      auto inst = generate(gen_opt);
      std::filesystem::create_directories(gen_opt.out_dir);
      std::ofstream sub(gen_opt.out_dir + "/substrate.json");
      sub << vnet::serialize_substrate(inst.net);
      std::ofstream reqs(gen_opt.out_dir + "/requests.json");
      reqs << vnet::serialize_requests(inst.requests, inst.net);
      nlohmann::json meta{{"planted_optimum", inst.planted_optimum},
                          {"seed", gen_opt.params.seed},
                          {"requests", gen_opt.params.request_count},
                          {"terminals", gen_opt.params.terminals_per_request},
                          {"stride", gen_opt.params.walk_stride},
                          {"ingress", gen_opt.params.ingress},
                          {"max_duration", gen_opt.params.max_duration}};
      std::ofstream meta_file(gen_opt.out_dir + "/meta.json");
      meta_file << meta.dump(2) << "\n";
      std::cout << "planted instance written to " << gen_opt.out_dir << " (optimum "
                << inst.planted_optimum << ")\n";
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
