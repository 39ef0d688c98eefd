#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcg {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Thrown when an iterative routine exhausts its iteration budget.
struct ConvergenceError : std::runtime_error {
  double residual;
  ConvergenceError(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
};

// Pauli matrices; index 0..3 -> I, sx, sy, sz.
const Mat2& pauli(int i);

// (sx + sz)/sqrt(2).
Mat2 hadamard_gate();

// Closed-form evolution under H = (1/2)(J sz + dEz sx), J and dEz in MHz,
// dt in ns. All MHz*ns unit bookkeeping lives here.
Mat2 su2_evolve(double j_mhz, double dez_mhz, double dt_ns);

// Coefficients of a traceless Hermitian operator in the Pauli basis, and back.
Vec3 pauli_coeffs(const Mat2& traceless_herm);
Mat2 pauli_compose(const Vec3& c);

// Pauli coefficients of U^dag (axis . sigma) U.
Vec3 conjugate_pauli(const Mat2& u, const Vec3& axis);

bool is_unitary(const Mat2& u, double tol = 1e-12);
bool is_density(const Mat2& rho, double tol = 1e-9);

// |tr(u^dag v)|^2 / 4 for unitaries; phase-invariant.
double process_fidelity(const Mat2& u, const Mat2& v);

// Quantum channel as a 4x4 superoperator, column-stacking convention:
// vec(rho) = (rho00, rho10, rho01, rho11).
struct Channel {
  Mat4 s = Mat4::Identity();

  static Channel identity() { return Channel{}; }
  static Channel from_unitary(const Mat2& u);
  static Channel from_choi(const Mat4& c);

  Mat2 apply(const Mat2& rho) const;
  // Choi matrix: block (i,j) holds E(|i><j|); composite row index = 2*i + a
  // with i the input index and a the output index.
  Mat4 choi() const;
  // Process matrix in the Pauli basis {I, sx, sy, sz}; unit trace for
  // trace-preserving maps.
  Mat4 chi() const;
};

Channel average_channels(const std::vector<Channel>& cs);
Channel average_channels(const std::vector<Channel>& cs,
                         const Eigen::VectorXd& weights);

bool is_trace_preserving(const Channel& c, double tol = 1e-9);
bool is_cptp(const Channel& c, double psd_tol = 1e-10, double tp_tol = 1e-9);

// Nearest CPTP channel in Frobenius distance on Choi matrices, by Dykstra
// alternating projection between the PSD cone and the trace-preservation
// affine subspace.
Channel project_cptp(const Channel& c, int max_iter = 10000, double tol = 1e-10);

// Closest physical density matrix to a Hermitian trace-1 input: zero the
// negative eigenvalues and redistribute the deficit over the remaining ones.
Mat2 mle_density(const Mat2& raw);

// Tr(chi_a chi_b) with chi matrices normalized to unit trace.
double process_fidelity(const Channel& a, const Channel& b);

}  // namespace dcg
