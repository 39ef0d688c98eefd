#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dcg/qcore.hpp"
#include "dcg/rng.hpp"
#include "dcg/sim.hpp"

using namespace dcg;

namespace {

Waveform plain_identity_waveform(double dez) {
  PulseSequence seq;
  seq.dez_mhz = dez;
  seq.segments = {{dez, 1e3 / (std::sqrt(2.0) * dez), SegmentRole::fixed}};
  return rasterize(seq, 1.0, true);
}

}  // namespace

TEST_CASE("stream derivation and normal draws are deterministic") {
  CHECK(derive_stream(1, 2, 3) == derive_stream(1, 2, 3));
  CHECK(derive_stream(1, 2, 3) != derive_stream(1, 2, 4));
  CHECK(derive_stream(1, 2, 3) != derive_stream(1, 3, 3));
  NormalStream a(42), b(42), c(43);
  const double first = a.next();
  CHECK(first == b.next());
  CHECK(first != c.next());
}

TEST_CASE("inverse-width form of the dephasing time") {
  CHECK(dephasing_time(0.2867) == doctest::Approx(785.06).epsilon(3e-5));
  CHECK(dephasing_time(0.25) == doctest::Approx(900.32).epsilon(3e-5));
}

TEST_CASE("noise draws honor the toggles and the requested widths") {
  NoiseSpec spec;
  spec.seed = 99;
  SUBCASE("both channels open") {
    double sdez = 0.0, sj = 0.0;
    const int n = 4096;
    for (int k = 0; k < n; ++k) {
      const NoiseDraw d = sample_noise(spec, 5, k);
      sdez += d.ddez_mhz * d.ddez_mhz;
      sj += (d.j_factor - 1.0) * (d.j_factor - 1.0);
    }
    CHECK(std::sqrt(sdez / n) == doctest::Approx(spec.sigma_dez_mhz).epsilon(0.05));
    CHECK(std::sqrt(sj / n) == doctest::Approx(spec.sigma_j_rel).epsilon(0.05));
  }
  SUBCASE("gradient channel closed") {
    NoiseSpec off = spec;
    off.hyperfine = false;
    for (int k = 0; k < 50; ++k) {
      CHECK(sample_noise(off, 5, k).ddez_mhz == 0.0);
      // closing one channel must not shift the other channel's draws
      CHECK(sample_noise(off, 5, k).j_factor == sample_noise(spec, 5, k).j_factor);
    }
  }
  SUBCASE("exchange channel closed") {
    NoiseSpec off = spec;
    off.charge = false;
    for (int k = 0; k < 50; ++k) {
      CHECK(sample_noise(off, 5, k).j_factor == 1.0);
      CHECK(sample_noise(off, 5, k).ddez_mhz == sample_noise(spec, 5, k).ddez_mhz);
    }
  }
  SUBCASE("repeatable per (cell, k)") {
    const NoiseDraw d1 = sample_noise(spec, 7, 3);
    const NoiseDraw d2 = sample_noise(spec, 7, 3);
    CHECK(d1.ddez_mhz == d2.ddez_mhz);
    CHECK(d1.j_factor == d2.j_factor);
    CHECK(sample_noise(spec, 8, 3).ddez_mhz != d1.ddez_mhz);
  }
}

TEST_CASE("waveform evolution composes per-sample steps") {
  const Waveform w = plain_identity_waveform(2.9);
  Mat2 manual = Mat2::Identity();
  for (Eigen::Index k = 0; k < w.samples.size(); ++k)
    manual = su2_evolve(w.samples(k), 2.9, w.dt_ns) * manual;
  CHECK((evolve_waveform(w, 2.9) - manual).norm() < 1e-12);

  const Mat2 shifted = evolve_waveform(w, 2.9, 0.3, 1.1);
  Mat2 manual2 = Mat2::Identity();
  for (Eigen::Index k = 0; k < w.samples.size(); ++k)
    manual2 = su2_evolve(1.1 * w.samples(k), 2.9 + 0.3, w.dt_ns) * manual2;
  CHECK((shifted - manual2).norm() < 1e-12);

  Waveform volts = w;
  volts.kind = SampleKind::voltage;
  CHECK_THROWS_AS(evolve_waveform(volts, 2.9), std::invalid_argument);
}

TEST_CASE("noise-free averaging reduces to the bare unitary") {
  NoiseSpec off;
  off.hyperfine = false;
  off.charge = false;
  off.n_realizations = 8;
  const Waveform w = plain_identity_waveform(2.9);
  const Channel avg = monte_carlo_channel(w, 2.9, off, 0);
  const Channel bare = Channel::from_unitary(evolve_waveform(w, 2.9));
  CHECK((avg.s - bare.s).norm() < 1e-9);
  const FidelityStats st = monte_carlo_fidelity(w, 2.9, Mat2::Identity(), off, 0);
  CHECK(st.se == 0.0);
}

TEST_CASE("averaged channel is identical for any worker count") {
  NoiseSpec spec;
  spec.seed = 2024;
  spec.n_realizations = 64;
  const Waveform w = plain_identity_waveform(2.5);
  const Channel serial = monte_carlo_channel(w, 2.5, spec, 3, 1);
  const Channel parallel = monte_carlo_channel(w, 2.5, spec, 3, 4);
  CHECK((serial.s - parallel.s).norm() == 0.0);
  const FidelityStats a = monte_carlo_fidelity(w, 2.5, Mat2::Identity(), spec, 3, 1);
  const FidelityStats b = monte_carlo_fidelity(w, 2.5, Mat2::Identity(), spec, 3, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
}

TEST_CASE("averaging over noise is physical and hurts fidelity") {
  NoiseSpec spec;
  spec.seed = 31;
  spec.n_realizations = 128;
  const Waveform w = plain_identity_waveform(2.9);
  const Channel avg = monte_carlo_channel(w, 2.9, spec, 0);
  CHECK(is_cptp(avg, 1e-8, 1e-8));
  const FidelityStats st = monte_carlo_fidelity(w, 2.9, Mat2::Identity(), spec, 0);
  CHECK(st.mean < 1.0);
  CHECK(st.mean > 0.9);
  CHECK(st.se > 0.0);
  CHECK(st.se < 0.01);
}

TEST_CASE("exact segment evolution for undistorted pulses") {
  PulseSequence seq;
  seq.dez_mhz = 2.9;
  // unrounded duration: rasterization would necessarily err, exact must not
  seq.segments = {{2.9, 1e3 / (std::sqrt(2.0) * 2.9), SegmentRole::fixed}};
  NoiseSpec off;
  off.hyperfine = false;
  off.charge = false;
  off.n_realizations = 4;
  const Channel exact = monte_carlo_channel_exact(seq, off, 0);
  CHECK(process_fidelity(exact, Channel::identity()) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("plain square gates at the nominal operating point") {
  const PulseSequence h = uncorrected_pulse(GateKind::hadamard, 2.5);
  REQUIRE(h.segments.size() == 1);
  CHECK(h.segments[0].j_mhz == 2.5);
  CHECK(h.segments[0].dur_ns ==
        doctest::Approx(1e3 / (2.0 * std::sqrt(2.0) * 2.5)).epsilon(1e-12));
  CHECK(process_fidelity(evolve_segments(h), gate_target(GateKind::hadamard)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const PulseSequence i = uncorrected_pulse(GateKind::identity, 2.9, 1.05, 0.98);
  CHECK(i.segments[0].j_mhz == doctest::Approx(1.05 * 2.9).epsilon(1e-15));
  CHECK(i.segments[0].dur_ns ==
        doctest::Approx(0.98 * 1e3 / (std::sqrt(2.0) * 2.9)).epsilon(1e-12));
  CHECK_THROWS_AS(uncorrected_pulse(GateKind::identity, 0.0), std::invalid_argument);

  CHECK((gate_target(GateKind::hadamard) - hadamard_gate()).norm() == 0.0);
  CHECK((gate_target(GateKind::identity) - Mat2::Identity()).norm() == 0.0);
}

TEST_CASE("landscape grids carry axes, labels and a smoothed best cell") {
  PulseSequence seq;
  seq.dez_mhz = 2.9;
  seq.label = "probe";
  seq.segments = {{9.7, 60.0, SegmentRole::j1}, {0.4, 122.0, SegmentRole::j2}};
  NoiseSpec spec;
  spec.seed = 5;
  spec.n_realizations = 6;
  SweepSpec grid{0.9, 1.1, 5, 0.8, 1.2, 3};
  const FidelityGrid g =
      sweep_corrected(seq, Mat2::Identity(), ExchangeModel{}, nullptr, spec, grid);
  CHECK(g.f.rows() == 5);
  CHECK(g.f.cols() == 3);
  CHECK(g.ax1(0) == 0.9);
  CHECK(g.ax1(4) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(g.ax2(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.label == "probe");
  CHECK(g.i_best >= 0);
  CHECK(g.i_best < 5);
  CHECK(g.j_best >= 0);
  CHECK(g.j_best < 3);
  CHECK((g.f.array() <= 1.0).all());
  CHECK((g.f.array() >= 0.0).all());
  CHECK((g.se.array() >= 0.0).all());
}

TEST_CASE("smoothed argmax ignores a lone outlier spike") {
  FidelityGrid g;
  g.ax1 = Eigen::VectorXd::LinSpaced(9, 0.0, 1.0);
  g.ax2 = Eigen::VectorXd::LinSpaced(9, 0.0, 1.0);
  g.f.resize(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      const double di = (i - 6) / 4.0, dj = (j - 6) / 4.0;
      g.f(i, j) = 1.0 - di * di - dj * dj;  // smooth peak at (6, 6)
    }
  g.f(1, 1) = 1.5;  // isolated lucky fluctuation
  g.se = Eigen::MatrixXd::Zero(9, 9);
  select_best_cell(g);
  CHECK(g.i_best == 6);
  CHECK(g.j_best == 6);
}

TEST_CASE("exchange-domain transfer pipeline defaults") {
  const FilterSpec f = exchange_domain_filter();
  CHECK(f.domain == FilterSpec::Domain::exchange);
  CHECK(f.highpass_enabled);
  CHECK(f.tau_lp_ns == 1.0);
  CHECK(f.a_hp == 0.05);
  CHECK(f.tau_hp_ns == 40.0);
}
