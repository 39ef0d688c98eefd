#include "dcg/pulse.hpp"

#include <cmath>
#include <stdexcept>

namespace dcg {

double ExchangeModel::voltage(double j_mhz) const {
  if (j_mhz <= 0) throw std::invalid_argument("ExchangeModel: J must be positive");
  return v0_mv * std::log(j_mhz / j0_mhz);
}

double ExchangeModel::exchange(double v_mv) const {
  return j0_mhz * std::exp(v_mv / v0_mv);
}

double voltage_from_exchange(double j_mhz, const ExchangeModel& model) {
  return model.voltage(j_mhz);
}

double exchange_from_voltage(double v_mv, const ExchangeModel& model) {
  return model.exchange(v_mv);
}

Waveform rasterize(const PulseSequence& seq, double dt_ns, bool round_segments) {
  if (dt_ns <= 0) throw std::invalid_argument("rasterize: dt must be positive");
  std::vector<double> durs;
  durs.reserve(seq.segments.size());
  double total = 0.0;
  for (const Segment& s : seq.segments) {
    const double d = round_segments ? static_cast<double>(std::llround(s.dur_ns)) : s.dur_ns;
    durs.push_back(d);
    total += d;
  }
  const auto n = static_cast<Eigen::Index>(std::ceil(total / dt_ns - 1e-9));
  Waveform w{dt_ns, SampleKind::exchange, Eigen::VectorXd::Zero(std::max<Eigen::Index>(n, 0))};
  size_t seg = 0;
  double seg_end = durs.empty() ? 0.0 : durs[0];
  for (Eigen::Index k = 0; k < w.samples.size(); ++k) {
    const double t = (static_cast<double>(k) + 0.5) * dt_ns;
    while (seg + 1 < durs.size() && t > seg_end) {
      ++seg;
      seg_end += durs[seg];
    }
    w.samples(k) = seq.segments[seg].j_mhz;
  }
  return w;
}

Eigen::VectorXd one_pole_lowpass(const Eigen::VectorXd& x, double tau_ns, double dt_ns) {
  if (tau_ns <= 0 || dt_ns <= 0)
    throw std::invalid_argument("one_pole_lowpass: tau and dt must be positive");
  const double a = std::exp(-dt_ns / tau_ns);
  Eigen::VectorXd y(x.size());
  if (x.size() == 0) return y;
  y(0) = x(0);  // settled at the initial level
  for (Eigen::Index k = 1; k < x.size(); ++k) y(k) = a * y(k - 1) + (1.0 - a) * x(k);
  return y;
}

Eigen::VectorXd partial_highpass(const Eigen::VectorXd& x, double a, double tau_ns,
                                 double dt_ns) {
  return x + a * (x - one_pole_lowpass(x, tau_ns, dt_ns));
}

Waveform apply_distortion(const Waveform& v, const FilterSpec& f) {
  if (v.kind != SampleKind::voltage)
    throw std::invalid_argument("apply_distortion: waveform must be a voltage");
  Waveform out = v;
  Eigen::VectorXd w = f.highpass_enabled
                          ? partial_highpass(v.samples, f.a_hp, f.tau_hp_ns, v.dt_ns)
                          : v.samples;
  out.samples = one_pole_lowpass(w, f.tau_lp_ns, v.dt_ns);
  return out;
}

Waveform distort_exchange(const PulseSequence& seq, const ExchangeModel& model,
                          const FilterSpec& f, double dt_ns) {
  Waveform j = rasterize(seq, dt_ns, true);
  if (f.domain == FilterSpec::Domain::voltage) {
    Waveform v{dt_ns, SampleKind::voltage,
               j.samples.unaryExpr([&](double x) {
                 return model.voltage(std::max(x, f.j_floor_mhz));
               })};
    const Waveform vd = apply_distortion(v, f);
    j.samples = vd.samples.unaryExpr(
        [&](double x) { return std::max(model.exchange(x), f.j_floor_mhz); });
  } else {
    Eigen::VectorXd w = f.highpass_enabled
                            ? partial_highpass(j.samples, f.a_hp, f.tau_hp_ns, dt_ns)
                            : j.samples;
    j.samples = one_pole_lowpass(w, f.tau_lp_ns, dt_ns).cwiseMax(f.j_floor_mhz);
  }
  return j;
}

Waveform circuit_response(const Waveform& v, const CircuitModel& c, double dt_ns) {
  if (c.r_gohm <= 0 || c.c1_af <= 0 || c.c2_af <= 0 || c.c3_af <= 0)
    throw std::invalid_argument("circuit_response: all components must be positive");
  const double c13 = c.c1_af * c.c3_af / (c.c1_af + c.c3_af);
  const double tau = c.r_gohm * (c.c2_af + c13);
  const double decay = std::exp(-dt_ns / tau);
  const double dc_gain = c.c1_af / (c.c1_af + c.c3_af);
  Waveform out = v;
  double node = 0.0;  // internal-node voltage, settled at DC
  double prev = v.samples.size() ? v.samples(0) : 0.0;
  for (Eigen::Index k = 0; k < v.samples.size(); ++k) {
    node += (v.samples(k) - prev) * c.c2_af / (c.c2_af + c13);
    prev = v.samples(k);
    const double vo =
        (c.c1_af * v.samples(k) + c.c3_af * node) / (c.c1_af + c.c3_af);
    out.samples(k) = vo / dc_gain;
    node *= decay;
  }
  return out;
}

PulseSequence scale_pulse(const PulseSequence& seq, double beta1, double beta2) {
  if (beta1 <= 0 || beta2 <= 0)
    throw std::invalid_argument("scale_pulse: scale factors must be positive");
  PulseSequence out = seq;
  for (Segment& s : out.segments) {
    if (s.role == SegmentRole::j1) s.j_mhz *= beta1;
    if (s.role == SegmentRole::j2) s.j_mhz *= beta2;
  }
  return out;
}

Mat2 evolve_segments(const PulseSequence& seq, double ddez_mhz, double j_factor) {
  Mat2 u = Mat2::Identity();
  for (const Segment& s : seq.segments)
    u = su2_evolve(s.j_mhz * j_factor, seq.dez_mhz + ddez_mhz, s.dur_ns) * u;
  return u;
}

}  // namespace dcg
