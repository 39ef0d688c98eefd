#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dcg/qcore.hpp"

namespace dcg {

// Segment roles drive beta scaling: strong (J1) and weak (J2) correction
// levels scale independently; "fixed" segments never scale.
enum class SegmentRole { fixed, j1, j2 };

struct Segment {
  double j_mhz = 0.0;
  double dur_ns = 0.0;
  SegmentRole role = SegmentRole::fixed;
};

struct PulseSequence {
  std::vector<Segment> segments;
  double dez_mhz = 0.0;
  std::string label;

  double duration() const {
    double t = 0.0;
    for (const Segment& s : segments) t += s.dur_ns;
    return t;
  }
};

// J(V) = J0 exp(V / V0) and its inverse.
struct ExchangeModel {
  double j0_mhz = 1.0;
  double v0_mv = 1.0;

  double voltage(double j_mhz) const;
  double exchange(double v_mv) const;
};

enum class SampleKind { exchange, voltage };

struct Waveform {
  double dt_ns = 1.0;
  SampleKind kind = SampleKind::exchange;
  Eigen::VectorXd samples;
};

// One-pole low-pass and partial high-pass response applied to a voltage
// waveform; the domain switch instead applies the same kernels directly to
// the exchange waveform.
struct FilterSpec {
  double tau_lp_ns = 1.0;
  double a_hp = 0.05;
  double tau_hp_ns = 40.0;
  enum class Domain { voltage, exchange } domain = Domain::voltage;
  bool highpass_enabled = true;
  double j_floor_mhz = 1e-4;
};

// Two-node RC network with a fast capacitive feed-through path; reproduces
// the partial high-pass response of FilterSpec. R in GOhm, C in aF
// (GOhm * aF = ns).
struct CircuitModel {
  double r_gohm = 10.0;
  double c1_af = 1.0;
  double c2_af = 4.0;
  double c3_af = 0.05;
};

double voltage_from_exchange(double j_mhz, const ExchangeModel& model);
double exchange_from_voltage(double v_mv, const ExchangeModel& model);

// Piecewise-constant sampling at step dt; with round_segments each duration
// is first rounded to the nearest whole nanosecond (ties away from zero).
Waveform rasterize(const PulseSequence& seq, double dt_ns = 1.0,
                   bool round_segments = true);

// Exact zero-order-hold one-pole recursions, settled at the first sample.
// Both preserve constants exactly (unit DC gain low-pass, zero DC high-pass).
Eigen::VectorXd one_pole_lowpass(const Eigen::VectorXd& x, double tau_ns, double dt_ns);
Eigen::VectorXd partial_highpass(const Eigen::VectorXd& x, double a, double tau_ns,
                                 double dt_ns);

// Voltage-domain distortion: (1 + K_hp) then K_lp.
Waveform apply_distortion(const Waveform& v, const FilterSpec& f);

// rasterize -> voltage -> filters -> exchange (or filter the exchange
// waveform directly when f.domain == exchange); output clamped at
// f.j_floor_mhz.
Waveform distort_exchange(const PulseSequence& seq, const ExchangeModel& model,
                          const FilterSpec& f, double dt_ns = 1.0);

// Exact per-step response of the RC network, output rescaled to unit DC gain.
Waveform circuit_response(const Waveform& v, const CircuitModel& c, double dt_ns);

PulseSequence scale_pulse(const PulseSequence& seq, double beta1, double beta2);

// Ordered product of closed-form segment unitaries at exact durations,
// with an additive gradient offset and a multiplicative exchange factor.
Mat2 evolve_segments(const PulseSequence& seq, double ddez_mhz = 0.0,
                     double j_factor = 1.0);

}  // namespace dcg
