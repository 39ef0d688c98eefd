#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dcg/pulse.hpp"
#include "dcg/qcore.hpp"
#include "dcg/scqc.hpp"

namespace dcg {

struct NoiseSpec {
  double sigma_dez_mhz = 0.2867;  // quasistatic gradient spread
  double sigma_j_rel = 0.012;     // relative exchange spread
  int n_realizations = 128;
  uint64_t seed = 0;
  bool hyperfine = true;
  bool charge = true;
};

struct NoiseDraw {
  double ddez_mhz = 0.0;
  double j_factor = 1.0;
};

// One quasistatic draw per realization. Both normals are always consumed so
// toggling one noise source never shifts the other one's stream.
NoiseDraw sample_noise(const NoiseSpec& spec, uint64_t cell, uint64_t k);

// 1/e decay time (ns) of free-induction coherence for a gradient spread in MHz.
double dephasing_time(double sigma_dez_mhz);

// Ordered product of closed-form sample propagators; the waveform must hold
// exchange samples. The factor multiplies the whole waveform.
Mat2 evolve_waveform(const Waveform& w, double dez_mhz, double ddez_mhz = 0.0,
                     double j_factor = 1.0);

// Equal-weight average of the per-realization unitary channels, projected
// back to CPTP. Realizations fill preallocated slots and are summed in index
// order, so the result is bitwise independent of the worker count.
Channel monte_carlo_channel(const Waveform& w, double dez_mhz, const NoiseSpec& noise,
                            uint64_t cell, int workers = 1);

// Same average with exact per-segment propagators (no sampling grid).
Channel monte_carlo_channel_exact(const PulseSequence& seq, const NoiseSpec& noise,
                                  uint64_t cell, int workers = 1);

struct FidelityStats {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

// Mean and standard error of the per-realization process fidelities against a
// target unitary. For unitary realizations the mean equals the channel
// fidelity of the averaged map.
FidelityStats monte_carlo_fidelity(const Waveform& w, double dez_mhz, const Mat2& target,
                                   const NoiseSpec& noise, uint64_t cell,
                                   int workers = 1);

enum class GateKind { identity, hadamard };

Mat2 gate_target(GateKind gate);

// Plain square pulse: J = xi1 * dEz held for xi2 * t_nom, where t_nom gives a
// pi (hadamard) or 2 pi (identity) rotation about the tilted axis.
PulseSequence uncorrected_pulse(GateKind gate, double dez_mhz, double xi1 = 1.0,
                                double xi2 = 1.0);

struct SweepSpec {
  double b1_min = 0.85, b1_max = 1.15;
  int n1 = 31;
  double b2_min = 0.85, b2_max = 1.15;
  int n2 = 31;
};

// Default axis ranges for the square-pulse amplitude/duration landscape.
inline SweepSpec xi_sweep_defaults() { return {0.8, 1.2, 31, 0.8, 1.2, 31}; }

struct FidelityGrid {
  Eigen::VectorXd ax1, ax2;
  Eigen::MatrixXd f;   // mean fidelity, n1 x n2
  Eigen::MatrixXd se;  // standard error per cell
  Eigen::Index i_best = 0, j_best = 0;  // see select_best_cell
  std::string label;
};

// Sets (i_best, j_best) to the argmax of the 3x3 box-smoothed landscape;
// a bare argmax over noisy cells is biased toward lucky fluctuations.
void select_best_cell(FidelityGrid& grid);

// Landscape over scale factors applied to the strong/weak correction levels.
// Each cell scales the pulse, rounds and distorts it (when a filter is
// given), then Monte Carlo averages with its own noise streams.
FidelityGrid sweep_corrected(const PulseSequence& seq, const Mat2& target,
                             const ExchangeModel& model, const FilterSpec* filter,
                             const NoiseSpec& noise, const SweepSpec& spec,
                             double dt_ns = 1.0, int workers = 1);

// Landscape over (xi1, xi2) = amplitude and duration scale of a square pulse.
FidelityGrid sweep_uncorrected(GateKind gate, double dez_mhz, const ExchangeModel& model,
                               const FilterSpec* filter, const NoiseSpec& noise,
                               const SweepSpec& spec, double dt_ns = 1.0,
                               int workers = 1);

inline FilterSpec exchange_domain_filter() {
  FilterSpec f;
  f.domain = FilterSpec::Domain::exchange;
  return f;
}

// Where the plain square-pulse rows are evaluated: at nominal amplitude and
// duration, or at the optimum of their own noisy (xi1, xi2) landscape.
enum class UncorrectedEval { design_point, sweep_optimum };

struct TableSpec {
  double dez_h_mhz = 2.5;
  double dez_i_mhz = 2.9;
  int n_h = 128;
  int n_i = 256;
  uint64_t seed = 12345;
  double dt_ns = 1.0;
  int workers = 1;
  NoiseSpec noise;  // sigma values; n, seed and toggles are set per cell
  ExchangeModel model;
  FilterSpec filter = exchange_domain_filter();
  SweepSpec sweep;
  SweepSpec sweep_xi = xi_sweep_defaults();
  UncorrectedEval uncorrected_eval = UncorrectedEval::design_point;
  double identity_j1_over_dez = 3.3448;
  double identity_j2_over_dez = 0.1379;
  double hadamard_jmax_over_dez = 10.0;
  double hadamard_j2_over_dez = 0.04;
};

struct Table1Row {
  std::string label;
  std::array<double, 4> f{};  // both noises, gradient only, exchange only, none
};

struct Table1Result {
  std::vector<Table1Row> rows;
  std::array<double, 2> beta_h{1.0, 1.0};
  std::array<double, 2> beta_i{1.0, 1.0};
  HadamardDesign hadamard;
  IdentityDesign identity;
  FidelityGrid sweep_h, sweep_i;  // landscapes used to pick the scale factors
};

// Six-row fidelity table: plain, corrected, and undistorted-corrected
// versions of both gates under four noise configurations. Corrected rows are
// evaluated at the scale factors maximizing the both-noise landscape;
// undistorted rows use the exact unscaled designs.
Table1Result table1(const TableSpec& spec);

}  // namespace dcg
