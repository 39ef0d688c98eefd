#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dcg/pulse.hpp"
#include "dcg/qcore.hpp"

using namespace dcg;

namespace {

PulseSequence two_level_sequence() {
  PulseSequence seq;
  seq.dez_mhz = 2.9;
  seq.segments = {{9.7, 10.3, SegmentRole::j1},
                  {0.4, 21.7, SegmentRole::j2},
                  {9.7, 10.5, SegmentRole::j1}};
  return seq;
}

}  // namespace

TEST_CASE("exchange-voltage map round trips") {
  ExchangeModel m;  // j0 = 1 MHz at 0 mV, slope 1 mV
  CHECK(m.exchange(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.exchange(2.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-15));
  CHECK(m.voltage(std::exp(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
  ExchangeModel steep{140.0, 50.0};
  for (double j : {0.05, 0.4, 9.7, 140.0, 300.0})
    CHECK(steep.exchange(steep.voltage(j)) == doctest::Approx(j).epsilon(1e-12));
  CHECK_THROWS_AS(m.voltage(0.0), std::invalid_argument);
  CHECK_THROWS_AS(m.voltage(-3.0), std::invalid_argument);
}

TEST_CASE("rasterization rounds segment durations to whole samples") {
  const Waveform w = rasterize(two_level_sequence(), 1.0, true);
  CHECK(w.kind == SampleKind::exchange);
  CHECK(w.dt_ns == 1.0);
  // 10.3 -> 10, 21.7 -> 22, 10.5 -> 11 (ties away from zero)
  CHECK(w.samples.size() == 10 + 22 + 11);
  CHECK(w.samples(0) == 9.7);
  CHECK(w.samples(9) == 9.7);
  CHECK(w.samples(10) == 0.4);
  CHECK(w.samples(31) == 0.4);
  CHECK(w.samples(32) == 9.7);
  CHECK(w.samples(42) == 9.7);
}

TEST_CASE("rasterization without rounding samples the exact boundaries") {
  const Waveform w = rasterize(two_level_sequence(), 1.0, false);
  // total 42.5 ns -> 43 midpoint samples; boundary at 10.3 puts sample 10
  // (midpoint 10.5) in the second segment
  CHECK(w.samples.size() == 43);
  CHECK(w.samples(9) == 9.7);
  CHECK(w.samples(10) == 0.4);
  // boundary at 32.0: midpoint 31.5 is still the weak level
  CHECK(w.samples(31) == 0.4);
  CHECK(w.samples(32) == 9.7);
}

TEST_CASE("one pole lowpass matches the exact step response") {
  const double tau = 5.0, dt = 1.0;
  const double a = std::exp(-dt / tau);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(40);
  x(0) = 0.0;
  const Eigen::VectorXd y = one_pole_lowpass(x, tau, dt);
  CHECK(y(0) == 0.0);  // starts settled at the first sample
  for (int n = 1; n < 40; ++n)
    CHECK(y(n) == doctest::Approx(1.0 - std::pow(a, n)).epsilon(1e-12));
  // constant input is a fixed point
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(25, 0.7);
  CHECK((one_pole_lowpass(c, tau, dt) - c).norm() == 0.0);
}

TEST_CASE("partial highpass adds a scaled detrended copy") {
  Eigen::VectorXd x(30);
  for (int i = 0; i < 30; ++i) x(i) = std::sin(0.4 * i) + 0.2 * i;
  const double a_hp = 0.05, tau = 40.0, dt = 1.0;
  const Eigen::VectorXd lp = one_pole_lowpass(x, tau, dt);
  const Eigen::VectorXd hp = partial_highpass(x, a_hp, tau, dt);
  CHECK((hp - (x + a_hp * (x - lp))).norm() < 1e-14);
}

TEST_CASE("voltage distortion rejects exchange-domain input") {
  const Waveform w = rasterize(two_level_sequence(), 1.0, true);
  FilterSpec f;  // voltage domain
  CHECK_THROWS_AS(apply_distortion(w, f), std::invalid_argument);
}

TEST_CASE("exchange-domain distortion is transparent for a constant pulse") {
  PulseSequence seq;
  seq.dez_mhz = 2.5;
  seq.segments = {{2.5, 141.0, SegmentRole::fixed}};
  FilterSpec f;
  f.domain = FilterSpec::Domain::exchange;
  const Waveform w = distort_exchange(seq, ExchangeModel{}, f, 1.0);
  CHECK(w.samples.size() == 141);
  for (int k = 0; k < w.samples.size(); ++k)
    CHECK(w.samples(k) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("exchange-domain distortion clamps undershoot at the floor") {
  PulseSequence seq;
  seq.dez_mhz = 2.9;
  seq.segments = {{20.0, 40.0, SegmentRole::j1}, {0.2, 120.0, SegmentRole::j2}};
  FilterSpec f;
  f.domain = FilterSpec::Domain::exchange;
  const Waveform w = distort_exchange(seq, ExchangeModel{}, f, 1.0);
  CHECK(w.samples.minCoeff() >= f.j_floor_mhz);
  // the overshoot transient really did hit the floor
  CHECK(w.samples.minCoeff() == f.j_floor_mhz);
}

TEST_CASE("rc network settles to unit gain") {
  const int n = 600;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, -3.0);
  for (int k = 100; k < n; ++k) x(k) = 1.5;
  Waveform v{1.0, SampleKind::voltage, x};
  const Waveform out = circuit_response(v, CircuitModel{}, 1.0);
  CHECK(out.kind == SampleKind::voltage);
  CHECK(out.samples(50) == doctest::Approx(-3.0).epsilon(1e-9));  // settled before step
  CHECK(out.samples(n - 1) == doctest::Approx(1.5).epsilon(1e-4));
  // lead-lag response: a few-percent overshoot right after the step, then an
  // exponential decay back to the target
  const double over0 = out.samples(100) - 1.5;
  CHECK(over0 > 0.01);
  CHECK(over0 < 0.1 * 4.5);
  for (int k = 101; k < n - 1; ++k) CHECK(out.samples(k) >= out.samples(k + 1) - 1e-12);
  // time constant near R*(C2 + series(C1, C3)) ~ 40.5 ns
  const double ratio = (out.samples(140) - 1.5) / over0;
  CHECK(ratio == doctest::Approx(std::exp(-40.0 / 40.476)).epsilon(0.03));
}

TEST_CASE("scaling touches only the matching correction level") {
  const PulseSequence seq = two_level_sequence();
  const PulseSequence scaled = scale_pulse(seq, 1.1, 0.7);
  CHECK(scaled.segments[0].j_mhz == doctest::Approx(9.7 * 1.1).epsilon(1e-15));
  CHECK(scaled.segments[1].j_mhz == doctest::Approx(0.4 * 0.7).epsilon(1e-15));
  CHECK(scaled.segments[2].j_mhz == doctest::Approx(9.7 * 1.1).epsilon(1e-15));
  for (size_t i = 0; i < seq.segments.size(); ++i)
    CHECK(scaled.segments[i].dur_ns == seq.segments[i].dur_ns);

  PulseSequence fixed;
  fixed.dez_mhz = 2.5;
  fixed.segments = {{2.5, 141.4, SegmentRole::fixed}};
  const PulseSequence fs = scale_pulse(fixed, 1.3, 0.5);
  CHECK(fs.segments[0].j_mhz == 2.5);
  CHECK(fs.segments[0].dur_ns == 141.4);
}

TEST_CASE("segment evolution matches the closed form") {
  PulseSequence seq;
  seq.dez_mhz = 2.5;
  seq.segments = {{2.5, 1e3 / (2.0 * std::sqrt(2.0) * 2.5), SegmentRole::fixed}};
  CHECK(process_fidelity(evolve_segments(seq), hadamard_gate()) ==
        doctest::Approx(1.0).epsilon(1e-12));

  PulseSequence two = seq;
  two.segments.push_back({7.7, 31.0, SegmentRole::j1});
  const Mat2 manual = su2_evolve(7.7, 2.5, 31.0) *
                      su2_evolve(2.5, 2.5, seq.segments[0].dur_ns);
  CHECK((evolve_segments(two) - manual).norm() < 1e-13);

  // gradient offset and exchange scale reach every segment
  const Mat2 bent = su2_evolve(7.7 * 1.02, 2.6, 31.0) *
                    su2_evolve(2.5 * 1.02, 2.6, seq.segments[0].dur_ns);
  CHECK((evolve_segments(two, 0.1, 1.02) - bent).norm() < 1e-13);

  CHECK(seq.duration() == doctest::Approx(seq.segments[0].dur_ns).epsilon(1e-15));
  CHECK(two.duration() ==
        doctest::Approx(seq.segments[0].dur_ns + 31.0).epsilon(1e-15));
}
