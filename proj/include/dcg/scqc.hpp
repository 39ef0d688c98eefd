#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "dcg/pulse.hpp"
#include "dcg/qcore.hpp"

namespace dcg {

// Angular speed of the binormal for a gradient dEz in MHz, in rad/ns.
inline double binormal_speed(double dez_mhz) { return 2.0 * kPi * dez_mhz * 1e-3; }

// Spherical curve sampled in time; |db/dt| = omega everywhere.
struct BinormalCurve {
  Eigen::VectorXd t;
  Eigen::Matrix3Xd b;
  double omega = 0.0;
};

struct SpaceCurve {
  Eigen::VectorXd t;
  Eigen::Matrix3Xd r;
};

// First-order error curve of a pulse: rdot(t) is the Pauli vector of
// U0^dag sx U0 and r its running integral.
struct ErrorCurve {
  Eigen::VectorXd t;
  Eigen::Matrix3Xd r;
  Eigen::Matrix3Xd rdot;
  Mat2 u_final;
  std::vector<Eigen::Index> segment_start;  // first sample index per segment
};

ErrorCurve error_curve_from_pulse(const PulseSequence& seq, double substep_ns = 0.1);

// Space curve with binormal b and constant torsion -omega:
// r(t) = -(1/omega) integral of b x db.
SpaceCurve curve_from_binormal(const BinormalCurve& bc);

// Vector area (1/2) closed-integral of b x db over the sampled loop.
Vec3 vector_area(const Eigen::Matrix3Xd& b);

// Projection from the south pole onto the tangent plane at the north pole.
Eigen::Vector2d stereographic_project(const Vec3& b);
Vec3 stereographic_lift(const Eigen::Vector2d& p);

// Frenet torsion from 5-point finite differences; samples must be uniform in
// t (periodic wrap when the curve closes).
Eigen::VectorXd torsion_profile(const SpaceCurve& c, bool periodic);

// Curvature |rdot x rddot| of an error curve (|rdot| = 1).
Eigen::VectorXd curvature_profile(const ErrorCurve& ec);

// Geodesic curvature bdd . (b x bd) / |bd|^3 with 5-point stencils; first and
// last two samples are copied from the nearest interior value.
Eigen::VectorXd geodesic_curvature(const BinormalCurve& bc);

// Random smooth closed spherical curve, reparametrized to constant speed.
BinormalCurve random_smooth_binormal(uint64_t seed, double omega, int n_modes = 4,
                                     int n_samples = 4096);

// Three-fold-symmetric closed curve of tangent circle arcs whose projected
// areas vanish; the geometric core of the corrected identity.
BinormalCurve build_identity_binormal(double j1, double j2, double dez,
                                      int n_per_arc = 2000);

struct IdentityDesign {
  double dez = 0.0;
  double j1 = 0.0, j2 = 0.0;
  double t1 = 0.0, t2 = 0.0;
  double gamma_rad = 0.0;
  double closure_residual_ns = 0.0;
  double total_ns = 0.0;
};

// Corrected identity: levels default to fixed multiples of dEz; segment times
// come from the tangent-arc geometry and are then polished to machine-level
// closure of the dynamical error curve.
IdentityDesign design_identity(double dez_mhz, double j1_mhz = -1.0,
                               double j2_mhz = -1.0);
PulseSequence identity_pulse(const IdentityDesign& d);

struct HadamardDesign {
  double dez = 0.0;
  double jh = 0.0, th = 0.0;
  double j1 = 0.0, j2 = 0.0;
  double t1 = 0.0, t2 = 0.0, tb = 0.0;
  double gamma_rad = 0.0;
  double residual_per_ns = 0.0;  // |r(T)| / T, the minimized leftover leakage
  double gate_fidelity = 0.0;    // vs the ideal Hadamard, noiseless
};

// Corrected Hadamard: square root-of-two pulse followed by a cyclically
// shifted traversal of a closed correction loop; the shift and the loop tilt
// minimize the residual error-curve displacement per unit time.
HadamardDesign design_hadamard(double dez_mhz, double jmax_mhz = -1.0,
                               double j2_mhz = -1.0);
PulseSequence hadamard_pulse(const HadamardDesign& d);

// Mean infidelity against the target under quasistatic gradient noise, one
// point per sigma = frac * dEz; exact segment timing.
std::vector<std::pair<double, double>> infidelity_vs_sigma(
    const PulseSequence& seq, const Mat2& target, const std::vector<double>& sigma_fracs,
    int n_realizations, uint64_t seed);

// Least-squares slope of log(infidelity) vs log(sigma).
double loglog_slope(const std::vector<std::pair<double, double>>& pts);

}  // namespace dcg
