#include "dcg/tomo.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "dcg/optim.hpp"
#include "dcg/rng.hpp"

namespace dcg {

Mat2 povm_element(const Vec3& axis, const PovmAxis& cal, bool plus) {
  const double s = plus ? 1.0 : -1.0;
  return 0.5 * ((1.0 + s * cal.offset) * Mat2::Identity() +
                s * cal.visibility * pauli_compose(axis.normalized()));
}

double simulate_measurement(const Mat2& rho, const Mat2& effect, int shots,
                            uint64_t seed) {
  if (shots <= 0) throw std::invalid_argument("simulate_measurement: shots must be positive");
  const double p = std::min(1.0, std::max(0.0, (effect * rho).trace().real()));
  std::mt19937_64 gen(seed);
  std::binomial_distribution<int> dist(shots, p);
  return static_cast<double>(dist(gen)) / shots;
}

Mat2 reconstruct_state(const std::vector<MeasurementAxis>& axes,
                       const Eigen::VectorXd& p_plus) {
  const auto n = static_cast<Eigen::Index>(axes.size());
  if (n < 3) throw std::invalid_argument("reconstruct_state: need at least three axes");
  if (p_plus.size() != n)
    throw std::invalid_argument("reconstruct_state: frequency count must match axes");
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a.row(i) = axes[i].cal.visibility * axes[i].axis.normalized().transpose();
    rhs(i) = 2.0 * p_plus(i) - 1.0 - axes[i].cal.offset;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) < 1e-9 || sv(2) < 1e-6 * sv(0))
    throw CalibrationError("reconstruct_state: singular axis/visibility set");
  const Vec3 b = svd.solve(rhs);
  return mle_density(0.5 * (Mat2::Identity() + pauli_compose(b)));
}

namespace {

// Gaussian ensemble average of U(delta) rho U(delta)^dag by Simpson
// quadrature over +-5 sigma.
Mat2 dephased_state(const Mat2& rho0, double j_mhz, double dez_mhz, double t_ns,
                    double sigma) {
  if (sigma <= 0) {
    const Mat2 u = su2_evolve(j_mhz, dez_mhz, t_ns);
    return u * rho0 * u.adjoint();
  }
  const int n = 161;  // odd
  const double lo = -5.0 * sigma, h = 10.0 * sigma / (n - 1);
  Mat2 acc = Mat2::Zero();
  double wsum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = lo + h * i;
    const double simpson = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double w = simpson * std::exp(-0.5 * d * d / (sigma * sigma));
    const Mat2 u = su2_evolve(j_mhz, dez_mhz + d, t_ns);
    acc += w * (u * rho0 * u.adjoint());
    wsum += w;
  }
  return acc / wsum;
}

const Vec3 kAxes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};

}  // namespace

std::vector<RamseyRecord> simulate_calibration_records(
    const PovmSet& truth, double dez_mhz, const std::vector<double>& j_levels,
    const Eigen::VectorXd& t_ns, double sigma_dez_mhz, int shots, uint64_t seed) {
  const Mat2 rho0 = 0.5 * (Mat2::Identity() - pauli(2));  // |-y>
  std::vector<RamseyRecord> out;
  out.reserve(j_levels.size());
  for (size_t s = 0; s < j_levels.size(); ++s) {
    RamseyRecord rec;
    rec.j_mhz = j_levels[s];
    rec.dez_mhz = dez_mhz;
    rec.t_ns = t_ns;
    rec.p_plus.resize(3, t_ns.size());
    for (Eigen::Index k = 0; k < t_ns.size(); ++k) {
      const Mat2 rho = dephased_state(rho0, rec.j_mhz, dez_mhz, t_ns(k), sigma_dez_mhz);
      for (int a = 0; a < 3; ++a)
        rec.p_plus(a, k) = simulate_measurement(
            rho, povm_element(kAxes[a], truth.axis(a), true), shots,
            derive_stream(seed, s * 4096 + static_cast<uint64_t>(k) * 4, a));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

namespace {

// Smooth feasibility penalties keep the joint fit away from degenerate
// visibilities and envelopes without flattening the gradient.
double barrier(double v, double lo, double hi) {
  double p = 0.0;
  if (v < lo) p += (lo - v);
  if (v > hi) p += (v - hi);
  return 100.0 * p * p;
}

struct CalProblem {
  const std::vector<RamseyRecord>* records;
  bool fit_povm = true;
  PovmSet fixed;  // used when fit_povm is false

  Eigen::Index n_resid() const {
    Eigen::Index n = 0;
    for (const auto& r : *records) n += r.t_ns.size();
    return n + 6 + 2 * static_cast<Eigen::Index>(records->size());
  }

  // theta = [vx vy vz ox oy oz, (T_s, c_s) per record] or just the envelopes.
  Eigen::VectorXd operator()(const Eigen::VectorXd& theta) const {
    PovmSet povm = fixed;
    int off = 0;
    if (fit_povm) {
      for (int a = 0; a < 3; ++a) povm.axis(a).visibility = theta(a);
      for (int a = 0; a < 3; ++a) povm.axis(a).offset = theta(3 + a);
      off = 6;
    }
    Eigen::VectorXd r(n_resid());
    Eigen::Index ri = 0;
    for (size_t s = 0; s < records->size(); ++s) {
      const RamseyRecord& rec = (*records)[s];
      const double t2 = theta(off + 2 * s);
      const double floor = theta(off + 2 * s + 1);
      for (Eigen::Index k = 0; k < rec.t_ns.size(); ++k) {
        Vec3 b;
        for (int a = 0; a < 3; ++a) {
          const double v =
              std::abs(povm.axis(a).visibility) < 0.05 ? 0.05 : povm.axis(a).visibility;
          b(a) = (2.0 * rec.p_plus(a, k) - 1.0 - povm.axis(a).offset) / v;
        }
        const double env =
            floor + (1.0 - floor) * std::exp(-(rec.t_ns(k) / t2) * (rec.t_ns(k) / t2));
        r(ri++) = b.norm() - env;
      }
    }
    for (int a = 0; a < 3; ++a) {
      r(ri++) = fit_povm ? barrier(theta(a), 0.2, 1.0) : 0.0;
      r(ri++) = fit_povm ? barrier(theta(3 + a), -0.5, 0.5) : 0.0;
    }
    for (size_t s = 0; s < records->size(); ++s) {
      r(ri++) = barrier(theta(off + 2 * s), 10.0, 1e5);
      r(ri++) = barrier(theta(off + 2 * s + 1), 0.0, 0.9);
    }
    return r;
  }

  double data_rms(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd r = (*this)(theta);
    Eigen::Index n = 0;
    for (const auto& rec : *records) n += rec.t_ns.size();
    return std::sqrt(r.head(n).squaredNorm() / n);
  }
};

}  // namespace

CalibrationResult calibrate_povm(const std::vector<RamseyRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("calibrate_povm: need at least one record");
  const auto ns = static_cast<Eigen::Index>(records.size());
  LevenbergMarquardtOptions opt;
  opt.max_iter = 400;

  // envelope-only fit at assumed-perfect readout sets the baseline
  CalProblem naive{&records, false, PovmSet{}};
  Eigen::VectorXd env0(2 * ns);
  for (Eigen::Index s = 0; s < ns; ++s) {
    env0(2 * s) = 0.5 * records[s].t_ns.maxCoeff();
    env0(2 * s + 1) = 0.05;
  }
  const auto naive_fit = levenberg_marquardt(
      [&](const Eigen::VectorXd& x) { return naive(x); }, env0, opt);

  CalProblem joint{&records, true, PovmSet{}};
  Eigen::VectorXd x0(6 + 2 * ns);
  x0 << 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, naive_fit.x;
  const auto fit = levenberg_marquardt(
      [&](const Eigen::VectorXd& x) { return joint(x); }, x0, opt);

  CalibrationResult out;
  for (int a = 0; a < 3; ++a) {
    out.povm.axis(a).visibility = fit.x(a);
    out.povm.axis(a).offset = fit.x(3 + a);
  }
  out.t2_ns.resize(ns);
  out.floor.resize(ns);
  for (Eigen::Index s = 0; s < ns; ++s) {
    out.t2_ns(s) = fit.x(6 + 2 * s);
    out.floor(s) = fit.x(6 + 2 * s + 1);
  }
  out.rms_naive = naive.data_rms(naive_fit.x);
  out.rms_fit = joint.data_rms(fit.x);
  return out;
}

std::vector<Mat2> tomography_inputs() {
  std::vector<Mat2> in(4);
  in[0] << 1, 0, 0, 0;
  in[1] << 0, 0, 0, 1;
  in[2] << 0.5, 0.5, 0.5, 0.5;
  in[3] << 0.5, -0.5 * cplx(0, 1), 0.5 * cplx(0, 1), 0.5;
  return in;
}

ProcessEstimate process_tomography(const std::vector<Mat2>& rho_in,
                                   const std::vector<Mat2>& rho_out) {
  const auto n = static_cast<Eigen::Index>(rho_in.size());
  if (n < 4) throw std::invalid_argument("process_tomography: need at least four inputs");
  if (rho_out.size() != rho_in.size())
    throw std::invalid_argument("process_tomography: input/output count mismatch");
  Eigen::MatrixXcd in(4, n), out(4, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    in.col(i) = Eigen::Map<const Eigen::Vector4cd>(rho_in[i].data());
    out.col(i) = Eigen::Map<const Eigen::Vector4cd>(rho_out[i].data());
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(in, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(3) < 1e-10 * sv(0) || sv(3) == 0.0)
    throw std::invalid_argument("process_tomography: inputs are not informationally complete");
  ProcessEstimate est;
  est.condition = sv(0) / sv(3);
  Channel lin;
  lin.s = out * svd.solve(Eigen::MatrixXcd::Identity(4, 4));  // out * pinv(in)
  est.channel = project_cptp(lin);
  est.cptp_residual = (est.channel.s - lin.s).norm();
  est.chi = est.channel.chi();
  return est;
}

}  // namespace dcg
