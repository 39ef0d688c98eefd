#include "dcg/qcore.hpp"

#include <array>
#include <cmath>

namespace dcg {

namespace {

const cplx kI(0.0, 1.0);

Eigen::Vector4cd vec2(const Mat2& m) {
  return Eigen::Vector4cd(m(0, 0), m(1, 0), m(0, 1), m(1, 1));
}

Mat2 unvec2(const Eigen::Vector4cd& v) {
  Mat2 m;
  m << v(0), v(2), v(1), v(3);
  return m;
}

// Columns are vec((I (x) P_m)|Omega>), i.e. component (2i + a) = P_m(a, i);
// satisfies M^dag M = 2 I.
const Mat4& chi_basis() {
  static const Mat4 m = [] {
    Mat4 out;
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 2; ++a) out(2 * i + a, k) = pauli(k)(a, i);
    return out;
  }();
  return m;
}

Mat4 project_psd(const Mat4& h) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (h + h.adjoint()));
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Mat4 project_tp(const Mat4& c) {
  Mat2 delta = Mat2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) delta(i, j) = c.block<2, 2>(2 * i, 2 * j).trace();
  delta -= Mat2::Identity();
  Mat4 out = c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) -= 0.5 * delta(i, j) * Mat2::Identity();
  return out;
}

}  // namespace

const Mat2& pauli(int i) {
  static const std::array<Mat2, 4> p = [] {
    std::array<Mat2, 4> out;
    out[0] << 1, 0, 0, 1;
    out[1] << 0, 1, 1, 0;
    out[2] << 0, -kI, kI, 0;
    out[3] << 1, 0, 0, -1;
    return out;
  }();
  return p.at(static_cast<size_t>(i));
}

Mat2 hadamard_gate() { return (pauli(1) + pauli(3)) / std::sqrt(2.0); }

Mat2 su2_evolve(double j_mhz, double dez_mhz, double dt_ns) {
  if (dt_ns < 0) throw std::invalid_argument("su2_evolve: negative duration");
  const double f = std::hypot(j_mhz, dez_mhz);
  if (f == 0.0 || dt_ns == 0.0) return Mat2::Identity();
  const double theta = kPi * f * dt_ns * 1e-3;
  const double c = std::cos(theta), s = std::sin(theta);
  const double nx = dez_mhz / f, nz = j_mhz / f;
  Mat2 u;
  u << c - kI * s * nz, -kI * s * nx, -kI * s * nx, c + kI * s * nz;
  return u;
}

Vec3 pauli_coeffs(const Mat2& m) {
  Vec3 c;
  for (int i = 0; i < 3; ++i) c(i) = 0.5 * (pauli(i + 1) * m).trace().real();
  return c;
}

Mat2 pauli_compose(const Vec3& c) {
  return c.x() * pauli(1) + c.y() * pauli(2) + c.z() * pauli(3);
}

Vec3 conjugate_pauli(const Mat2& u, const Vec3& axis) {
  return pauli_coeffs(u.adjoint() * pauli_compose(axis) * u);
}

bool is_unitary(const Mat2& u, double tol) {
  return (u.adjoint() * u - Mat2::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(std::abs(u.determinant()) - 1.0) <= tol;
}

bool is_density(const Mat2& rho, double tol) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho.trace().real() - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Mat2> es(rho);
  return es.eigenvalues()(0) >= -10 * tol;
}

double process_fidelity(const Mat2& u, const Mat2& v) {
  return std::min(1.0, std::norm((u.adjoint() * v).trace()) / 4.0);
}

Channel Channel::from_unitary(const Mat2& u) {
  Channel c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      c.s.block<2, 2>(2 * i, 2 * j) = std::conj(u(i, j)) * u;
  return c;
}

Mat2 Channel::apply(const Mat2& rho) const { return unvec2(s * vec2(rho)); }

Mat4 Channel::choi() const {
  Mat4 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat2 e;
      e << 0, 0, 0, 0;
      e(i, j) = 1.0;
      c.block<2, 2>(2 * i, 2 * j) = unvec2(s * vec2(e));
    }
  return c;
}

Channel Channel::from_choi(const Mat4& c) {
  Channel out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.s.col(i + 2 * j) = vec2(c.block<2, 2>(2 * i, 2 * j));
  return out;
}

Mat4 Channel::chi() const {
  const Mat4& m = chi_basis();
  return m.adjoint() * choi() * m / 4.0;
}

Channel average_channels(const std::vector<Channel>& cs,
                         const Eigen::VectorXd& weights) {
  if (cs.empty()) throw std::invalid_argument("average_channels: empty list");
  if (weights.size() != static_cast<Eigen::Index>(cs.size()))
    throw std::invalid_argument("average_channels: weight count mismatch");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("average_channels: weights must sum to 1");
  Channel out;
  out.s = Mat4::Zero();
  for (size_t i = 0; i < cs.size(); ++i) out.s += weights(static_cast<Eigen::Index>(i)) * cs[i].s;
  return out;
}

Channel average_channels(const std::vector<Channel>& cs) {
  if (cs.empty()) throw std::invalid_argument("average_channels: empty list");
  Channel out;
  out.s = Mat4::Zero();
  for (const Channel& c : cs) out.s += c.s;
  out.s /= static_cast<double>(cs.size());
  return out;
}

bool is_trace_preserving(const Channel& c, double tol) {
  const Mat4 ch = c.choi();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const cplx t = ch.block<2, 2>(2 * i, 2 * j).trace();
      if (std::abs(t - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  return true;
}

bool is_cptp(const Channel& c, double psd_tol, double tp_tol) {
  if (!is_trace_preserving(c, tp_tol)) return false;
  Eigen::SelfAdjointEigenSolver<Mat4> es(c.choi());
  return es.eigenvalues()(0) >= -psd_tol;
}

Channel project_cptp(const Channel& c, int max_iter, double tol) {
  Mat4 x = c.choi();
  x = 0.5 * (x + x.adjoint());
  Mat4 p = Mat4::Zero(), q = Mat4::Zero();
  Mat4 prev = x;
  for (int it = 0; it < max_iter; ++it) {
    const Mat4 y = project_tp(x + p);
    p = x + p - y;
    const Mat4 z = project_psd(y + q);
    q = y + q - z;
    const double step = (z - prev).cwiseAbs().maxCoeff();
    const double infeas = (z - y).cwiseAbs().maxCoeff();
    prev = z;
    x = z;
    if (step < tol && infeas < 10 * tol) return Channel::from_choi(z);
  }
  throw ConvergenceError("project_cptp: iteration cap reached",
                         (prev - project_tp(prev)).norm());
}

Mat2 mle_density(const Mat2& raw) {
  if ((raw - raw.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("mle_density: input not Hermitian");
  if (std::abs(raw.trace().real() - 1.0) > 1e-9)
    throw std::invalid_argument("mle_density: input trace must be 1");
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (raw + raw.adjoint()));
  Eigen::Vector2d ev = es.eigenvalues();  // ascending
  if (ev(0) >= 0) return raw;
  ev(1) += ev(0);
  ev(0) = 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double process_fidelity(const Channel& a, const Channel& b) {
  if (!is_cptp(a, 1e-7, 1e-6) || !is_cptp(b, 1e-7, 1e-6))
    throw std::invalid_argument("process_fidelity: channels must be CPTP");
  Mat4 xa = a.chi(), xb = b.chi();
  xa /= xa.trace().real();
  xb /= xb.trace().real();
  const double f = (xa * xb).trace().real();
  return std::min(1.0, std::max(0.0, f));
}

}  // namespace dcg
