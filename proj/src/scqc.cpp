#include "dcg/scqc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dcg/optim.hpp"
#include "dcg/rng.hpp"

namespace dcg {

namespace {

using Eigen::Matrix3d;
using Eigen::Matrix3Xd;

Matrix3d rotz(double a) {
  Matrix3d m;
  m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}

Matrix3d rot_about(const Vec3& axis, double ang) {
  return Eigen::AngleAxisd(ang, axis.normalized()).toRotationMatrix();
}

double angle_between(const Vec3& u, const Vec3& v) {
  return std::acos(std::min(1.0, std::max(-1.0, u.dot(v))));
}

// Point at spherical distance alpha1 from axis a1 and alpha2 from a2, on the
// great circle through both axes.
Vec3 tangency_point(const Vec3& a1, double alpha1, const Vec3& a2, double alpha2) {
  const double d = angle_between(a1, a2);
  Vec3 u = a2 - std::cos(d) * a1;
  const double nu = u.norm();
  if (nu < 1e-12) throw std::domain_error("tangency_point: coincident axes");
  u /= nu;
  for (double sgn : {1.0, -1.0}) {
    const Vec3 p = std::cos(alpha1) * a1 + sgn * std::sin(alpha1) * u;
    if (std::abs(angle_between(p, a2) - alpha2) < 1e-7) return p;
  }
  throw std::domain_error("tangency_point: no point at the stated distances");
}

// Polar angles of connector axes at azimuth 60 deg whose circle is internally
// tangent to the lobe circle (axis distance |alpha2 - alpha1|).
std::vector<double> connector_deltas(double gamma, double dist) {
  auto f = [&](double d) {
    return std::cos(gamma) * std::cos(d) + 0.5 * std::sin(gamma) * std::sin(d) -
           std::cos(dist);
  };
  std::vector<double> roots;
  const int n = 2000;
  double prev_d = 1e-5, prev_f = f(prev_d);
  for (int i = 1; i <= n; ++i) {
    const double d = 1e-5 + (kPi - 2e-5) * i / n;
    const double fd = f(d);
    if (prev_f == 0.0) roots.push_back(prev_d);
    else if (prev_f * fd < 0) roots.push_back(brent_root(f, prev_d, d, 1e-14));
    prev_d = d;
    prev_f = fd;
  }
  return roots;
}

// Signed rotation angle about axis taking p_from to p_to; positive
// orientation returns a value in [0, 2pi).
double arc_angle(const Vec3& axis, const Vec3& p_from, const Vec3& p_to,
                 int orientation) {
  Vec3 e1 = p_from - p_from.dot(axis) * axis;
  Vec3 e2 = p_to - p_to.dot(axis) * axis;
  e1.normalize();
  e2.normalize();
  double ang = std::atan2(e1.cross(e2).dot(axis), e1.dot(e2));
  if (orientation > 0) {
    if (ang < 0) ang += 2 * kPi;
    return ang;
  }
  return ang > 0 ? ang - 2 * kPi : ang;
}

struct ThreefoldArcs {
  Vec3 a1, a2;     // lobe and connector axes (lobe 0)
  Vec3 p01, p02;   // tangency points entering/leaving the connector
  Vec3 p_in;       // start of the lobe-0 big arc
  double ang_b = 0.0, ang_c = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
};

// Tangent direction of the circle about `axis` at point p, for positive
// winding.
Vec3 circle_tangent(const Vec3& axis, const Vec3& p) { return axis.cross(p).normalized(); }

ThreefoldArcs threefold_arcs(double alpha1, double alpha2, double gamma) {
  ThreefoldArcs g;
  g.alpha1 = alpha1;
  g.alpha2 = alpha2;
  g.a1 = Vec3(std::sin(gamma), 0.0, std::cos(gamma));
  const Vec3 a1n = rotz(2 * kPi / 3) * g.a1;
  const double dist = std::abs(alpha2 - alpha1);
  for (double delta : connector_deltas(gamma, dist)) {
    Vec3 a2(0.5 * std::sin(delta), 0.5 * std::sqrt(3.0) * std::sin(delta),
            std::cos(delta));
    Vec3 p01, p02;
    try {
      p01 = tangency_point(g.a1, alpha1, a2, alpha2);
      p02 = tangency_point(a1n, alpha1, a2, alpha2);
    } catch (const std::domain_error&) {
      continue;
    }
    // same-winding C1 joints: tangents must agree at both tangency points
    if (circle_tangent(g.a1, p01).dot(circle_tangent(a2, p01)) < 1.0 - 1e-8) continue;
    if (circle_tangent(a2, p02).dot(circle_tangent(a1n, p02)) < 1.0 - 1e-8) continue;
    g.a2 = a2;
    g.p01 = p01;
    g.p02 = p02;
    g.p_in = rotz(-2 * kPi / 3) * p02;
    g.ang_b = arc_angle(g.a1, g.p_in, p01, +1);
    g.ang_c = arc_angle(a2, p01, p02, +1);
    if (g.ang_b < 1e-9 || g.ang_c < 1e-9) continue;
    return g;
  }
  throw std::domain_error("threefold_arcs: no tangent connector at this tilt");
}

Matrix3Xd sample_arc(const Vec3& axis, const Vec3& p_from, double ang, int n) {
  Matrix3Xd out(3, n);
  for (int k = 0; k < n; ++k)
    out.col(k) = rot_about(axis, ang * k / n) * p_from;
  return out;
}

// Closed three-fold curve samples plus per-sample times (unit binormal speed
// omega).
BinormalCurve sample_threefold(const ThreefoldArcs& g, double omega, int n_big,
                               int n_conn) {
  const double len_b = g.ang_b * std::sin(g.alpha1);
  const double len_c = g.ang_c * std::sin(g.alpha2);
  const int n_lobe = n_big + n_conn;
  BinormalCurve bc;
  bc.omega = omega;
  bc.b.resize(3, 3 * n_lobe);
  bc.t.resize(3 * n_lobe);
  const Matrix3Xd big = sample_arc(g.a1, g.p_in, g.ang_b, n_big);
  const Matrix3Xd conn = sample_arc(g.a2, g.p01, g.ang_c, n_conn);
  const double t_lobe = (len_b + len_c) / omega;
  for (int k = 0; k < 3; ++k) {
    const Matrix3d rk = rotz(2 * kPi * k / 3);
    bc.b.middleCols(k * n_lobe, n_big) = rk * big;
    bc.b.middleCols(k * n_lobe + n_big, n_conn) = rk * conn;
    for (int i = 0; i < n_big; ++i)
      bc.t(k * n_lobe + i) = k * t_lobe + len_b / omega * i / n_big;
    for (int i = 0; i < n_conn; ++i)
      bc.t(k * n_lobe + n_big + i) =
          k * t_lobe + len_b / omega + len_c / omega * i / n_conn;
  }
  return bc;
}

struct GammaRoot {
  double gamma = 0.0, t1 = 0.0, t2 = 0.0;
};

// All tilts where the z projected area of the three-fold curve vanishes.
std::vector<GammaRoot> identity_gamma_roots(double alpha1, double alpha2, double omega,
                                            int n_per_arc) {
  auto area_z = [&](double gamma) {
    const ThreefoldArcs g = threefold_arcs(alpha1, alpha2, gamma);
    return vector_area(sample_threefold(g, omega, n_per_arc, n_per_arc).b).z();
  };
  const int n_scan = 240;
  std::vector<GammaRoot> roots;
  double prev_g = 0.0, prev_a = 0.0;
  bool prev_ok = false;
  for (int i = 1; i < n_scan; ++i) {
    const double gamma = 0.02 + (kPi - 0.04) * i / n_scan;
    double a;
    bool ok = true;
    try {
      a = area_z(gamma);
    } catch (const std::domain_error&) {
      ok = false;
      a = 0.0;
    }
    if (ok && prev_ok && prev_a * a < 0) {
      const double gr = brent_root(area_z, prev_g, gamma, 1e-12);
      const ThreefoldArcs g = threefold_arcs(alpha1, alpha2, gr);
      roots.push_back({gr, g.ang_b * std::sin(alpha1) / omega,
                       g.ang_c * std::sin(alpha2) / omega});
    }
    prev_g = gamma;
    prev_a = a;
    prev_ok = ok;
  }
  return roots;
}

PulseSequence identity_sequence(double dez, double j1, double j2, double t1, double t2) {
  PulseSequence seq;
  seq.dez_mhz = dez;
  seq.label = "corrected identity";
  for (int k = 0; k < 3; ++k) {
    seq.segments.push_back({j1, t1, SegmentRole::j1});
    seq.segments.push_back({j2, t2, SegmentRole::j2});
  }
  return seq;
}

}  // namespace

ErrorCurve error_curve_from_pulse(const PulseSequence& seq, double substep_ns) {
  if (substep_ns <= 0) throw std::invalid_argument("error_curve: substep must be positive");
  Eigen::Index total = 1;
  std::vector<int> counts;
  counts.reserve(seq.segments.size());
  for (const Segment& s : seq.segments) {
    const int n = std::max(1, static_cast<int>(std::ceil(s.dur_ns / substep_ns - 1e-12)));
    counts.push_back(n);
    total += n;
  }
  ErrorCurve ec;
  ec.t.resize(total);
  ec.r.resize(3, total);
  ec.rdot.resize(3, total);
  Mat2 u = Mat2::Identity();
  const Vec3 xhat(1, 0, 0);
  ec.t(0) = 0.0;
  ec.r.col(0).setZero();
  ec.rdot.col(0) = conjugate_pauli(u, xhat);
  Eigen::Index idx = 1;
  double t = 0.0;
  for (size_t si = 0; si < seq.segments.size(); ++si) {
    ec.segment_start.push_back(idx - 1);
    const Segment& s = seq.segments[si];
    const int n = counts[si];
    const double h = s.dur_ns / n;
    const Mat2 ustep = su2_evolve(s.j_mhz, seq.dez_mhz, h);
    for (int k = 0; k < n; ++k, ++idx) {
      u = ustep * u;
      t += h;
      ec.t(idx) = t;
      ec.rdot.col(idx) = conjugate_pauli(u, xhat);
      ec.r.col(idx) = ec.r.col(idx - 1) + 0.5 * h * (ec.rdot.col(idx - 1) + ec.rdot.col(idx));
    }
  }
  ec.u_final = u;
  return ec;
}

SpaceCurve curve_from_binormal(const BinormalCurve& bc) {
  SpaceCurve c;
  c.t = bc.t;
  c.r.resize(3, bc.b.cols());
  if (bc.b.cols() == 0) return c;
  c.r.col(0).setZero();
  for (Eigen::Index k = 1; k < bc.b.cols(); ++k)
    c.r.col(k) =
        c.r.col(k - 1) - Vec3(bc.b.col(k - 1)).cross(Vec3(bc.b.col(k))) / bc.omega;
  return c;
}

Vec3 vector_area(const Eigen::Matrix3Xd& b) {
  Vec3 a = Vec3::Zero();
  const Eigen::Index n = b.cols();
  for (Eigen::Index k = 0; k < n; ++k)
    a += Vec3(b.col(k)).cross(Vec3(b.col((k + 1) % n)));
  return 0.5 * a;
}

Eigen::Vector2d stereographic_project(const Vec3& b) {
  return 2.0 * Eigen::Vector2d(b.x(), b.y()) / (1.0 + b.z());
}

Vec3 stereographic_lift(const Eigen::Vector2d& p) {
  const double q = p.squaredNorm() / 4.0;
  return Vec3(p.x(), p.y(), 1.0 - q) / (1.0 + q);
}

Eigen::VectorXd torsion_profile(const SpaceCurve& c, bool periodic) {
  const Eigen::Index n = c.r.cols();
  if (n < 7) throw std::invalid_argument("torsion_profile: too few samples");
  const double h = c.t(1) - c.t(0);
  Eigen::VectorXd tau(n);
  tau.setConstant(std::numeric_limits<double>::quiet_NaN());
  const Eigen::Index lo = periodic ? 0 : 2;
  const Eigen::Index hi = periodic ? n : n - 2;
  auto at = [&](Eigen::Index k) { return Vec3(c.r.col(((k % n) + n) % n)); };
  for (Eigen::Index k = lo; k < hi; ++k) {
    const Vec3 rm2 = at(k - 2), rm1 = at(k - 1), r0 = at(k), rp1 = at(k + 1), rp2 = at(k + 2);
    const Vec3 d1 = (-rp2 + 8 * rp1 - 8 * rm1 + rm2) / (12 * h);
    const Vec3 d2 = (-rp2 + 16 * rp1 - 30 * r0 + 16 * rm1 - rm2) / (12 * h * h);
    const Vec3 d3 = (rp2 - 2 * rp1 + 2 * rm1 - rm2) / (2 * h * h * h);
    const Vec3 cx = d1.cross(d2);
    tau(k) = cx.dot(d3) / cx.squaredNorm();
  }
  return tau;
}

Eigen::VectorXd curvature_profile(const ErrorCurve& ec) {
  const Eigen::Index n = ec.rdot.cols();
  Eigen::VectorXd kappa(n);
  kappa.setConstant(std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    const Vec3 d1 = ec.rdot.col(k);
    const Vec3 d2 =
        (Vec3(ec.rdot.col(k + 1)) - Vec3(ec.rdot.col(k - 1))) / (ec.t(k + 1) - ec.t(k - 1));
    kappa(k) = d1.cross(d2).norm() / std::pow(d1.norm(), 3);
  }
  return kappa;
}

Eigen::VectorXd geodesic_curvature(const BinormalCurve& bc) {
  const Eigen::Index n = bc.b.cols();
  if (n < 5) throw std::invalid_argument("geodesic_curvature: too few samples");
  Eigen::VectorXd kg(n);
  for (Eigen::Index k = 2; k + 2 < n; ++k) {
    const double h = bc.t(k + 1) - bc.t(k);
    const Vec3 bm2 = bc.b.col(k - 2), bm1 = bc.b.col(k - 1), b0 = bc.b.col(k),
               bp1 = bc.b.col(k + 1), bp2 = bc.b.col(k + 2);
    const Vec3 d1 = (-bp2 + 8 * bp1 - 8 * bm1 + bm2) / (12 * h);
    const Vec3 d2 = (-bp2 + 16 * bp1 - 30 * b0 + 16 * bm1 - bm2) / (12 * h * h);
    kg(k) = d2.dot(b0.cross(d1)) / std::pow(d1.norm(), 3);
  }
  kg(0) = kg(1) = kg(2);
  kg(n - 1) = kg(n - 2) = kg(n - 3);
  return kg;
}

BinormalCurve random_smooth_binormal(uint64_t seed, double omega, int n_modes,
                                     int n_samples) {
  if (omega <= 0) throw std::invalid_argument("random_smooth_binormal: omega > 0 required");
  if (n_modes < 1 || n_samples < 64)
    throw std::invalid_argument("random_smooth_binormal: too few modes or samples");
  NormalStream g(derive_stream(seed, 0xB1A0));
  const int dense = 4 * n_samples;

  // The ensemble must wind one way (positive geodesic curvature throughout):
  // the reconstructed space curve has curvature omega*|kg|, so a kg zero
  // crossing degenerates the Frenet frame and flips the torsion sign —
  // physical curves never do this because the exchange J(t) stays positive.
  // A smoothly modulated circle about a random axis keeps kg sign-definite.
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec3 axis;
    do {
      for (int i = 0; i < 3; ++i) axis(i) = g.next();
    } while (axis.norm() < 1e-6);
    axis.normalize();
    Vec3 e1 =
        axis.cross(std::abs(axis.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX()).normalized();
    const Vec3 e2 = axis.cross(e1);
    const double alpha = 0.75 + 0.25 * std::tanh(g.next());  // cone half-angle

    std::vector<double> at(n_modes), bt(n_modes), ap(n_modes), bp(n_modes);
    for (int m = 0; m < n_modes; ++m) {
      const double scale = 1.0 / ((m + 1) * (m + 1));
      at[m] = scale * g.next();
      bt[m] = scale * g.next();
      ap[m] = scale * g.next();
      bp[m] = scale * g.next();
    }
    auto series = [&](const std::vector<double>& ca, const std::vector<double>& cb,
                      double u) {
      double s = 0.0;
      for (int m = 0; m < n_modes; ++m)
        s += ca[m] * std::cos((m + 1) * u) + cb[m] * std::sin((m + 1) * u);
      return s;
    };
    auto series_d = [&](const std::vector<double>& ca, const std::vector<double>& cb,
                        double u) {
      double s = 0.0;
      for (int m = 0; m < n_modes; ++m)
        s += (m + 1) * (cb[m] * std::cos((m + 1) * u) - ca[m] * std::sin((m + 1) * u));
      return s;
    };
    double mth = 0.0, mph = 0.0;
    for (int j = 0; j < dense; ++j) {
      const double u = 2 * kPi * j / dense;
      mth = std::max(mth, std::abs(series(at, bt, u)));
      mph = std::max(mph, std::abs(series(ap, bp, u)));
    }
    const double sth = mth > 0 ? 0.18 * alpha / mth : 0.0;  // polar-angle wobble
    const double sph = mph > 0 ? 0.35 / mph : 0.0;          // azimuth wobble

    auto point = [&](double u) -> Vec3 {
      const double theta = alpha + sth * series(at, bt, u);
      const double phi = u + sph * series(ap, bp, u);
      return std::sin(theta) * (std::cos(phi) * e1 + std::sin(phi) * e2) +
             std::cos(theta) * axis;
    };
    auto speed = [&](double u) {
      const double theta = alpha + sth * series(at, bt, u);
      const double td = sth * series_d(at, bt, u);
      const double pd = 1.0 + sph * series_d(ap, bp, u);
      return std::hypot(td, std::sin(theta) * pd);
    };

    // total length by the trapezoid rule (spectrally accurate on a smooth
    // periodic integrand), then equal-arclength parameters u_i by RK4 on
    // du/ds = 1/speed; sampling the analytic loop keeps high derivatives
    // clean for the discrete Frenet formulas downstream
    double total = 0.0;
    for (int j = 0; j < dense; ++j) total += speed(2 * kPi * j / dense);
    total *= 2 * kPi / dense;

    BinormalCurve bc;
    bc.omega = omega;
    bc.b.resize(3, n_samples);
    bc.t.resize(n_samples);
    const double ds = total / n_samples;
    double u = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      bc.b.col(i) = point(u);
      bc.t(i) = i * ds / omega;
      const double k1 = 1.0 / speed(u);
      const double k2 = 1.0 / speed(u + 0.5 * ds * k1);
      const double k3 = 1.0 / speed(u + 0.5 * ds * k2);
      const double k4 = 1.0 / speed(u + ds * k3);
      u += ds * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
    }
    // floor comparable to the weakest designed level (J/dEz ~ 0.14): the
    // torsion formula divides by curvature^2, so flat spots amplify stencil
    // noise even when the winding never reverses
    if (geodesic_curvature(bc).minCoeff() > 0.15) return bc;
  }
  throw ConvergenceError("random_smooth_binormal: no single-winding draw", 0.0);
}

BinormalCurve build_identity_binormal(double j1, double j2, double dez, int n_per_arc) {
  const double alpha1 = std::atan2(dez, j1);
  const double alpha2 = std::atan2(dez, j2);
  const double omega = binormal_speed(dez);
  const auto roots = identity_gamma_roots(alpha1, alpha2, omega, n_per_arc);
  if (roots.empty())
    throw ConvergenceError("build_identity_binormal: no vanishing-area tilt", 0.0);
  const GammaRoot* best = &roots[0];
  for (const auto& r : roots)
    if (r.t1 + r.t2 < best->t1 + best->t2) best = &r;
  const ThreefoldArcs g = threefold_arcs(alpha1, alpha2, best->gamma);
  const int n_conn = std::max(
      16, static_cast<int>(std::lround(n_per_arc * (best->t2 / std::max(best->t1, 1e-12)))));
  return sample_threefold(g, omega, n_per_arc, n_conn);
}

IdentityDesign design_identity(double dez_mhz, double j1_mhz, double j2_mhz) {
  if (dez_mhz <= 0) throw std::invalid_argument("design_identity: dEz must be positive");
  IdentityDesign d;
  d.dez = dez_mhz;
  d.j1 = j1_mhz > 0 ? j1_mhz : 3.3448 * dez_mhz;
  d.j2 = j2_mhz > 0 ? j2_mhz : 0.1379 * dez_mhz;
  const double alpha1 = std::atan2(dez_mhz, d.j1);
  const double alpha2 = std::atan2(dez_mhz, d.j2);
  const double omega = binormal_speed(dez_mhz);
  const auto roots = identity_gamma_roots(alpha1, alpha2, omega, 600);
  if (roots.empty())
    throw ConvergenceError("design_identity: no vanishing-area tilt", 0.0);
  const GammaRoot* best = &roots[0];
  for (const auto& r : roots)
    if (r.t1 + r.t2 < best->t1 + best->t2) best = &r;
  d.gamma_rad = best->gamma;

  auto closure = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const ErrorCurve ec =
        error_curve_from_pulse(identity_sequence(dez_mhz, d.j1, d.j2, x(0), x(1)), 0.02);
    return Eigen::VectorXd(ec.r.col(ec.r.cols() - 1));
  };
  Eigen::VectorXd x0(2);
  x0 << best->t1, best->t2;
  LevenbergMarquardtOptions opt;
  opt.xtol = 1e-13;
  opt.ftol = 1e-26;
  const auto lm = levenberg_marquardt(closure, x0, opt);
  d.t1 = lm.x(0);
  d.t2 = lm.x(1);
  d.closure_residual_ns = lm.residuals.norm();
  d.total_ns = 3.0 * (d.t1 + d.t2);
  return d;
}

PulseSequence identity_pulse(const IdentityDesign& d) {
  return identity_sequence(d.dez, d.j1, d.j2, d.t1, d.t2);
}

namespace {

PulseSequence hadamard_sequence(double dez, double jh, double th, double j1, double j2,
                                double t1, double t2, double tb) {
  PulseSequence seq;
  seq.dez_mhz = dez;
  seq.label = "corrected hadamard";
  seq.segments = {{jh, th, SegmentRole::fixed}, {j1, t1 - tb, SegmentRole::j1},
                  {j2, t2, SegmentRole::j2},    {j1, t1, SegmentRole::j1},
                  {j2, t2, SegmentRole::j2},    {j1, t1, SegmentRole::j1},
                  {j2, t2, SegmentRole::j2},    {j1, tb, SegmentRole::j1}};
  return seq;
}

}  // namespace

HadamardDesign design_hadamard(double dez_mhz, double jmax_mhz, double j2_mhz) {
  if (dez_mhz <= 0) throw std::invalid_argument("design_hadamard: dEz must be positive");
  HadamardDesign d;
  d.dez = dez_mhz;
  const double jmax = jmax_mhz > 0 ? jmax_mhz : 10.0 * dez_mhz;
  d.jh = dez_mhz;
  d.th = 1e3 / (2.0 * std::sqrt(2.0) * dez_mhz);
  d.j1 = jmax / 1.15;  // headroom for upward scale sweeps
  d.j2 = j2_mhz > 0 ? j2_mhz : 0.04 * dez_mhz;
  if (d.j1 <= d.dez)
    throw std::invalid_argument("design_hadamard: exchange ceiling too low");
  const double alpha1 = std::atan2(dez_mhz, d.j1);
  const double alpha2 = std::atan2(dez_mhz, d.j2);
  const double omega = binormal_speed(dez_mhz);

  auto family_times = [&](double gamma) {
    const ThreefoldArcs g = threefold_arcs(alpha1, alpha2, gamma);
    return std::pair<double, double>(g.ang_b * std::sin(alpha1) / omega,
                                     g.ang_c * std::sin(alpha2) / omega);
  };
  auto residual = [&](double gamma, double fb, double substep) {
    const auto [t1, t2] = family_times(gamma);
    const PulseSequence seq =
        hadamard_sequence(dez_mhz, d.jh, d.th, d.j1, d.j2, t1, t2, fb * t1);
    const ErrorCurve ec = error_curve_from_pulse(seq, substep);
    return Vec3(ec.r.col(ec.r.cols() - 1)).norm() / seq.duration();
  };

  double best_g = 0.0, best_fb = 0.0, best_r = std::numeric_limits<double>::max();
  for (int i = 0; i < 60; ++i) {
    const double gamma = 0.05 + (kPi - 0.10) * i / 59.0;
    double t1, t2;
    try {
      std::tie(t1, t2) = family_times(gamma);
    } catch (const std::domain_error&) {
      continue;
    }
    if (t1 < 1.0 || t1 > 500.0 || t2 < 1.0 || t2 > 500.0) continue;
    for (int k = 0; k < 10; ++k) {
      const double fb = 0.05 + 0.90 * k / 9.0;
      const double r = residual(gamma, fb, 0.5);
      if (r < best_r) {
        best_r = r;
        best_g = gamma;
        best_fb = fb;
      }
    }
  }
  if (best_r == std::numeric_limits<double>::max())
    throw ConvergenceError("design_hadamard: no feasible correction loop", 0.0);

  auto objective = [&](const Eigen::VectorXd& x) {
    if (x(0) < 0.02 || x(0) > kPi - 0.02 || x(1) < 0.01 || x(1) > 0.99) return 1.0;
    try {
      return residual(x(0), x(1), 0.2);
    } catch (const std::domain_error&) {
      return 1.0;
    }
  };
  Eigen::VectorXd x0(2), step(2);
  x0 << best_g, best_fb;
  step << 0.02, 0.02;
  NelderMeadOptions nm;
  nm.xtol = 1e-11;
  nm.ftol = 1e-15;
  nm.max_iter = 500;
  const auto res = nelder_mead(objective, x0, step, nm);
  d.gamma_rad = res.x(0);
  std::tie(d.t1, d.t2) = family_times(d.gamma_rad);
  d.tb = res.x(1) * d.t1;
  const ErrorCurve ec = error_curve_from_pulse(hadamard_pulse(d), 0.01);
  d.residual_per_ns = Vec3(ec.r.col(ec.r.cols() - 1)).norm() /
                      (d.th + 3 * (d.t1 + d.t2));
  d.gate_fidelity = process_fidelity(ec.u_final, hadamard_gate());
  return d;
}

PulseSequence hadamard_pulse(const HadamardDesign& d) {
  return hadamard_sequence(d.dez, d.jh, d.th, d.j1, d.j2, d.t1, d.t2, d.tb);
}

std::vector<std::pair<double, double>> infidelity_vs_sigma(
    const PulseSequence& seq, const Mat2& target, const std::vector<double>& sigma_fracs,
    int n_realizations, uint64_t seed) {
  std::vector<std::pair<double, double>> out;
  out.reserve(sigma_fracs.size());
  for (size_t i = 0; i < sigma_fracs.size(); ++i) {
    const double sigma = sigma_fracs[i] * seq.dez_mhz;
    NormalStream g(derive_stream(seed, i));
    double acc = 0.0;
    for (int k = 0; k < n_realizations; ++k)
      acc += process_fidelity(evolve_segments(seq, sigma * g.next()), target);
    out.emplace_back(sigma, 1.0 - acc / n_realizations);
  }
  return out;
}

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace dcg
