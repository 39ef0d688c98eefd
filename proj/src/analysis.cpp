#include "dcg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "dcg/optim.hpp"
#include "dcg/rng.hpp"

namespace dcg {

namespace {

double median(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  const Eigen::Index n = v.size();
  return n % 2 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

// Acklam's rational approximation of the inverse normal CDF.
double inverse_normal_cdf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  if (p <= 0 || p >= 1)
    throw std::invalid_argument("inverse_normal_cdf: p must be in (0, 1)");
  if (p < plow) {
    const double q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    const double q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double q = p - 0.5, r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

RamseyFit fit_ramsey(const Eigen::VectorXd& t_ns, const Eigen::VectorXd& y,
                     Envelope env) {
  const Eigen::Index n = t_ns.size();
  if (n < 8 || y.size() != n)
    throw std::invalid_argument("fit_ramsey: need >= 8 matching samples");
  const double b0 = y.mean();
  const Eigen::VectorXd c = y.array() - b0;
  const double span = t_ns.maxCoeff() - t_ns.minCoeff();
  if (span <= 0) throw std::invalid_argument("fit_ramsey: degenerate time axis");

  // spectral scan seeds the frequency; flat series have no usable peak
  double dt_min = span;
  for (Eigen::Index k = 1; k < n; ++k)
    dt_min = std::min(dt_min, std::abs(t_ns(k) - t_ns(k - 1)));
  const double f_max = 0.5e3 / std::max(dt_min, 1e-9);
  const int nf = 2048;
  Eigen::VectorXd power(nf);
  std::complex<double> z_best = 0.0;
  double f0 = 0.0, p_best = -1.0;
  for (int i = 0; i < nf; ++i) {
    const double f = f_max * (i + 1) / nf;
    std::complex<double> z = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
      z += c(k) * std::exp(std::complex<double>(0.0, -2 * kPi * f * t_ns(k) * 1e-3));
    power(i) = std::norm(z);
    if (power(i) > p_best) {
      p_best = power(i);
      f0 = f;
      z_best = z;
    }
  }
  if (p_best < 4.0 * median(power) || p_best <= 0.0)
    throw FitError("fit_ramsey: no oscillation detected");

  Eigen::VectorXd x0(5);
  x0 << 2.0 * std::abs(z_best) / n, f0, std::arg(z_best), 0.5 * span, b0;
  auto model = [&](const Eigen::VectorXd& p, double t) {
    const double phase = 2 * kPi * p(1) * t * 1e-3 + p(2);
    const double tt = t / p(3);
    const double e = env == Envelope::gaussian ? std::exp(-tt * tt) : std::exp(-tt);
    return p(0) * std::cos(phase) * e + p(4);
  };
  auto resid = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(n);
    for (Eigen::Index k = 0; k < n; ++k) r(k) = model(p, t_ns(k)) - y(k);
    return r;
  };
  const auto fit = levenberg_marquardt(resid, x0);
  RamseyFit out;
  out.a = std::abs(fit.x(0));
  out.f_mhz = std::abs(fit.x(1));
  out.phi_rad = fit.x(2);
  out.t2_ns = std::abs(fit.x(3));
  out.b = fit.x(4);
  out.rms = fit.rms;
  out.converged = fit.converged;
  return out;
}

ExchangeFit fit_exchange_model(const Eigen::VectorXd& v_mv,
                               const Eigen::VectorXd& f_mhz) {
  const Eigen::Index n = v_mv.size();
  if (n < 4 || f_mhz.size() != n)
    throw std::invalid_argument("fit_exchange_model: need >= 4 matching samples");
  const double dez0 = 0.999 * f_mhz.minCoeff();

  // line through ln J estimated on the exchange-dominated points
  std::vector<double> vs, lj;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double j2 = f_mhz(k) * f_mhz(k) - dez0 * dez0;
    if (j2 > 0.2 * dez0 * dez0) {
      vs.push_back(v_mv(k));
      lj.push_back(0.5 * std::log(j2));
    }
  }
  double slope = 0.02, icept = 0.0;
  if (vs.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < vs.size(); ++k) {
      sx += vs[k];
      sy += lj[k];
      sxx += vs[k] * vs[k];
      sxy += vs[k] * lj[k];
    }
    const double m = static_cast<double>(vs.size());
    const double den = m * sxx - sx * sx;
    if (std::abs(den) > 1e-12) {
      slope = (m * sxy - sx * sy) / den;
      icept = (sy - slope * sx) / m;
    }
  }
  Eigen::VectorXd x0(3);
  x0 << std::exp(icept), 1.0 / std::max(std::abs(slope), 1e-4), std::max(dez0, 1e-3);
  auto resid = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double j = p(0) * std::exp(v_mv(k) / p(1));
      r(k) = std::sqrt(j * j + p(2) * p(2)) - f_mhz(k);
    }
    return r;
  };
  const auto fit = levenberg_marquardt(resid, x0);

  ExchangeFit out;
  out.j0_mhz = fit.x(0);
  out.v0_mv = fit.x(1);
  out.dez_mhz = std::abs(fit.x(2));
  out.rms = fit.rms;
  // conditioning of J^T J from a forward-difference Jacobian at the solution
  Eigen::MatrixXd jac(n, 3);
  const Eigen::VectorXd r0 = resid(fit.x);
  for (int p = 0; p < 3; ++p) {
    Eigen::VectorXd xp = fit.x;
    const double h = 1e-7 * std::max(1.0, std::abs(xp(p)));
    xp(p) += h;
    jac.col(p) = (resid(xp) - r0) / h;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const double smin = svd.singularValues()(2), smax = svd.singularValues()(0);
  out.condition = smin > 0 ? (smax / smin) * (smax / smin)
                           : std::numeric_limits<double>::infinity();
  out.ill_conditioned = !(out.condition < 1e6);
  return out;
}

LinecutErrorbar linecut_errorbar(const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
  const Eigen::Index n = x.size();
  if (n < 7 || f.size() != n)
    throw std::invalid_argument("linecut_errorbar: need >= 7 matching samples");
  const double lo = x.minCoeff(), hi = x.maxCoeff();
  if (hi <= lo) throw std::invalid_argument("linecut_errorbar: degenerate axis");
  Eigen::MatrixXd a(n, 5);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double u = 2.0 * (x(k) - lo) / (hi - lo) - 1.0;
    double p = 1.0;
    for (int d = 0; d < 5; ++d) {
      a(k, d) = p;
      p *= u;
    }
  }
  LinecutErrorbar out;
  out.residuals = f - a * a.colPivHouseholderQr().solve(f);
  out.sigma = std::sqrt(out.residuals.squaredNorm() / (n - 5));

  Eigen::VectorXd sorted = out.residuals;
  std::sort(sorted.data(), sorted.data() + n);
  Eigen::VectorXd q(n);
  for (Eigen::Index k = 0; k < n; ++k)
    q(k) = inverse_normal_cdf((k + 1 - 0.375) / (n + 0.25));
  const double ms = sorted.mean(), mq = q.mean();
  const double cov = ((sorted.array() - ms) * (q.array() - mq)).sum();
  const double den = std::sqrt((sorted.array() - ms).square().sum() *
                               (q.array() - mq).square().sum());
  out.qq_correlation = den > 0 ? cov / den : 0.0;
  return out;
}

std::vector<ScatterStats> fidelity_scatter(const Waveform& w, double dez_mhz,
                                           const Mat2& target, const NoiseSpec& noise,
                                           int repeats, uint64_t seed, int workers) {
  if (repeats < 20)
    throw std::invalid_argument("fidelity_scatter: need at least 20 repeats");
  struct Config {
    bool hyp, chg;
    const char* label;
  };
  const Config configs[3] = {{true, false, "gradient noise"},
                             {false, true, "exchange noise"},
                             {true, true, "both noises"}};
  std::vector<ScatterStats> out(3);
  for (int c = 0; c < 3; ++c) {
    out[c].label = configs[c].label;
    out[c].values.resize(repeats);
    for (int r = 0; r < repeats; ++r) {
      NoiseSpec ns = noise;
      ns.hyperfine = configs[c].hyp;
      ns.charge = configs[c].chg;
      ns.seed = derive_stream(seed, 0xA0 + static_cast<uint64_t>(c), r);
      out[c].values[r] = monte_carlo_fidelity(w, dez_mhz, target, ns, 0, workers).mean;
    }
    double mean = 0.0;
    for (double v : out[c].values) mean += v;
    mean /= repeats;
    double var = 0.0;
    for (double v : out[c].values) var += (v - mean) * (v - mean);
    out[c].mean = mean;
    out[c].stddev = std::sqrt(var / (repeats - 1));
  }
  return out;
}

}  // namespace dcg
