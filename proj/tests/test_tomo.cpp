#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dcg/qcore.hpp"
#include "dcg/rng.hpp"
#include "dcg/tomo.hpp"

using namespace dcg;

TEST_CASE("readout effects in terms of visibility and offset") {
  const Mat2 ideal = povm_element(Vec3::UnitZ(), PovmAxis{}, true);
  CHECK(std::abs(ideal(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(ideal(1, 1)) < 1e-15);
  CHECK(std::abs(ideal(0, 1)) < 1e-15);

  const PovmAxis cal{0.8, 0.1};
  const Mat2 ep = povm_element(Vec3::UnitZ(), cal, true);
  const Mat2 em = povm_element(Vec3::UnitZ(), cal, false);
  CHECK(std::abs(ep(0, 0) - 0.95) < 1e-15);  // (1 + 0.1 + 0.8) / 2
  CHECK(std::abs(ep(1, 1) - 0.15) < 1e-15);  // (1 + 0.1 - 0.8) / 2
  // the pair is a resolution of identity
  CHECK((ep + em - Mat2::Identity()).norm() < 1e-15);
}

TEST_CASE("informationally complete input set") {
  const std::vector<Mat2> in = tomography_inputs();
  REQUIRE(in.size() == 4);
  for (const Mat2& r : in) {
    CHECK(std::abs(r.trace().real() - 1.0) < 1e-14);
    CHECK((r - r.adjoint()).norm() < 1e-14);
    // all four are pure states
    CHECK(std::abs((r * r - r).norm()) < 1e-14);
  }
  CHECK(std::abs(in[0](0, 0).real() - 1.0) < 1e-14);
  CHECK(std::abs(in[1](1, 1).real() - 1.0) < 1e-14);
  CHECK(std::abs(in[2](0, 1).real() - 0.5) < 1e-14);
  CHECK(std::abs(in[3](0, 1).imag() + 0.5) < 1e-14);
}

TEST_CASE("process tomography inverts exact input/output pairs") {
  const Mat2 u = hadamard_gate() * su2_evolve(3.0, 2.5, 17.0);
  const Channel truth = Channel::from_unitary(u);
  const std::vector<Mat2> in = tomography_inputs();
  std::vector<Mat2> out;
  for (const Mat2& r : in) out.push_back(truth.apply(r));

  const ProcessEstimate est = process_tomography(in, out);
  CHECK((est.chi - truth.chi()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(est.cptp_residual < 1e-8);
  CHECK(est.condition > 0.0);
  CHECK(est.condition < 100.0);
  CHECK(process_fidelity(est.channel, truth) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("process tomography rejects a rank-deficient input set") {
  std::vector<Mat2> in = tomography_inputs();
  in[3] = in[2];  // only three independent states remain
  std::vector<Mat2> out = in;
  CHECK_THROWS_AS(process_tomography(in, out), std::invalid_argument);
}

TEST_CASE("state reconstruction undoes a known miscalibration") {
  const Vec3 bloch(0.3, -0.5, 0.6);
  const Mat2 rho = 0.5 * (Mat2::Identity() + pauli_compose(bloch));
  std::vector<MeasurementAxis> axes = {{Vec3::UnitX(), {0.9, 0.02}},
                                       {Vec3::UnitY(), {0.85, -0.04}},
                                       {Vec3::UnitZ(), {0.8, 0.1}}};
  Eigen::VectorXd p(3);
  for (int i = 0; i < 3; ++i)
    p(i) = (povm_element(axes[i].axis, axes[i].cal, true) * rho).trace().real();
  const Mat2 rec = reconstruct_state(axes, p);
  CHECK((rec - rho).norm() < 1e-10);

  SUBCASE("degenerate axes are rejected") {
    axes[1].axis = Vec3::UnitX();
    CHECK_THROWS_AS(reconstruct_state(axes, p), CalibrationError);
  }
  SUBCASE("zero visibility is rejected") {
    axes[2].cal.visibility = 0.0;
    CHECK_THROWS_AS(reconstruct_state(axes, p), CalibrationError);
  }
}

TEST_CASE("binomial sampling of a readout effect") {
  const Mat2 rho = (Mat2() << 1, 0, 0, 0).finished();
  const Mat2 e = povm_element(Vec3::UnitZ(), PovmAxis{}, true);
  // deterministic outcome needs no averaging
  CHECK(simulate_measurement(rho, e, 500, 7) == 1.0);
  const Mat2 half = Mat2::Identity() * 0.5;
  const double f1 = simulate_measurement(half, e, 10000, 7);
  CHECK(f1 == simulate_measurement(half, e, 10000, 7));
  CHECK(f1 > 0.45);
  CHECK(f1 < 0.55);
  CHECK(f1 != simulate_measurement(half, e, 10000, 8));
}

TEST_CASE("synthetic free-induction records have the right shape") {
  PovmSet truth;
  truth.z = {0.85, 0.0};
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(41, 0.0, 400.0);
  const std::vector<RamseyRecord> recs =
      simulate_calibration_records(truth, 2.9, {0.75, 7.5}, t, 0.2867, 5000, 11);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].j_mhz == 0.75);
  CHECK(recs[1].j_mhz == 7.5);
  for (const RamseyRecord& r : recs) {
    CHECK(r.dez_mhz == 2.9);
    CHECK(r.t_ns.size() == 41);
    CHECK(r.p_plus.cols() == 41);
    CHECK((r.p_plus.array() >= 0.0).all());
    CHECK((r.p_plus.array() <= 1.0).all());
  }
}

TEST_CASE("joint calibration recovers a planted z visibility") {
  PovmSet truth;
  truth.z = {0.85, 0.0};
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(25, 0.0, 600.0);
  const std::vector<RamseyRecord> recs =
      simulate_calibration_records(truth, 2.9, {0.75, 7.5}, t, 0.2867, 10000, 42);
  const CalibrationResult cal = calibrate_povm(recs);
  CHECK(std::abs(cal.povm.z.visibility - 0.85) < 0.03);
  // an uncalibrated fit leaves large Bloch-length oscillations behind
  CHECK(cal.rms_naive / cal.rms_fit > 5.0);
  CHECK(cal.t2_ns.size() == 2);
  CHECK(cal.floor.size() == 2);
  CHECK((cal.floor.array() >= 0.0).all());
  CHECK((cal.floor.array() < 1.0).all());
}
