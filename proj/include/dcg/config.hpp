#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dcg/pulse.hpp"
#include "dcg/scqc.hpp"
#include "dcg/sim.hpp"

namespace dcg {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GateConfig {
  double dez_mhz = 0.0;
  int n_realizations = 0;
};

struct DesignConfig {
  double identity_j1_over_dez = 3.3448;
  double identity_j2_over_dez = 0.1379;
  double hadamard_jmax_over_dez = 10.0;
  double hadamard_j2_over_dez = 0.04;
};

struct RunConfig {
  GateConfig identity{2.9, 256};
  GateConfig hadamard{2.5, 128};
  ExchangeModel model;
  NoiseSpec noise;
  bool filter_enabled = true;
  FilterSpec filter = exchange_domain_filter();
  CircuitModel circuit;
  SweepSpec sweep_beta;
  SweepSpec sweep_xi = xi_sweep_defaults();
  DesignConfig design;
  UncorrectedEval uncorrected_eval = UncorrectedEval::design_point;
  std::string out_dir = "out";
  int workers = 1;
  double dt_ns = 1.0;
  int scatter_repeats = 24;
  uint64_t seed = 0;
  bool seed_set = false;
};

// Layer a JSON file over the current values. Unknown keys, wrong types and
// malformed files raise ConfigError.
void merge_config_file(RunConfig& cfg, const std::string& path);
void merge_config_text(RunConfig& cfg, const std::string& text, const std::string& origin);

// Fully-resolved configuration, stable key order.
std::string config_to_json(const RunConfig& cfg);

// Views and conveniences shared by the command-line tools.
TableSpec table_spec(const RunConfig& cfg);
IdentityDesign run_design_identity(const RunConfig& cfg);
HadamardDesign run_design_hadamard(const RunConfig& cfg);

}  // namespace dcg
