#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dcg/qcore.hpp"

namespace dcg {

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Imperfect projective readout along one axis: the +1 effect is
// ((1 + offset) I + visibility a.sigma) / 2.
struct PovmAxis {
  double visibility = 1.0;
  double offset = 0.0;
};

struct PovmSet {
  PovmAxis x, y, z;

  const PovmAxis& axis(int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  PovmAxis& axis(int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

Mat2 povm_element(const Vec3& axis, const PovmAxis& cal, bool plus);

// Frequency of +1 outcomes over `shots` binomial trials with p = tr(E rho).
double simulate_measurement(const Mat2& rho, const Mat2& effect, int shots,
                            uint64_t seed);

struct MeasurementAxis {
  Vec3 axis = Vec3::UnitZ();
  PovmAxis cal;
};

// Least-squares Bloch inversion of +1 frequencies measured along >= 3 axes
// (visibility and offset removed), then maximum-likelihood projection to a
// density matrix. Throws CalibrationError when the axis set or visibilities
// leave the inversion singular.
Mat2 reconstruct_state(const std::vector<MeasurementAxis>& axes,
                       const Eigen::VectorXd& p_plus);

// Free-induction record at fixed exchange: +1 frequencies along x, y, z for
// a |-y> initial state at each time.
struct RamseyRecord {
  double j_mhz = 0.0;
  double dez_mhz = 0.0;
  Eigen::VectorXd t_ns;
  Eigen::Matrix3Xd p_plus;  // rows x, y, z
};

// Synthetic calibration data: quasistatic-averaged evolution measured with an
// imperfect POVM and binomial shot noise.
std::vector<RamseyRecord> simulate_calibration_records(
    const PovmSet& truth, double dez_mhz, const std::vector<double>& j_levels,
    const Eigen::VectorXd& t_ns, double sigma_dez_mhz, int shots, uint64_t seed);

struct CalibrationResult {
  PovmSet povm;
  Eigen::VectorXd t2_ns;    // fitted envelope time per record
  Eigen::VectorXd floor;    // fitted Bloch-length floor per record
  double rms_naive = 0.0;   // envelope-only fit at unit visibility
  double rms_fit = 0.0;     // joint POVM + envelope fit
};

// Joint fit of POVM visibilities/offsets and per-record purity envelopes
// (floor + (1 - floor) Gaussian): a miscalibrated POVM makes the
// reconstructed Bloch length oscillate, a calibrated one leaves a smooth
// decay.
CalibrationResult calibrate_povm(const std::vector<RamseyRecord>& records);

// |0>, |1>, |+x>, |+y> - an informationally complete input set.
std::vector<Mat2> tomography_inputs();

struct ProcessEstimate {
  Channel channel;
  Mat4 chi;
  double cptp_residual = 0.0;  // Frobenius change made by the CPTP projection
  double condition = 0.0;      // conditioning of the input-state inversion
};

// Linear inversion of input/output density-matrix pairs followed by CPTP
// projection. Throws std::invalid_argument unless the inputs span the full
// operator space.
ProcessEstimate process_tomography(const std::vector<Mat2>& rho_in,
                                   const std::vector<Mat2>& rho_out);

}  // namespace dcg
