#include "dcg/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace dcg {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                             const NelderMeadOptions& opt) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 0; i < n; ++i) xs[i + 1](i) += step(i);
  for (int i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  std::vector<int> ord(n + 1);
  NelderMeadResult res;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = ord[0], worst = ord[n], second = ord[n - 1];

    double spread = 0.0;
    for (int i = 1; i <= n; ++i)
      spread = std::max(spread, (xs[ord[i]] - xs[best]).cwiseAbs().maxCoeff());
    if (spread < opt.xtol && std::abs(fs[worst] - fs[best]) < opt.ftol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += xs[i];
    centroid /= n;

    const Eigen::VectorXd xr = centroid + (centroid - xs[worst]);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[second]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      const Eigen::VectorXd xc = centroid + 0.5 * (xs[worst] - centroid);
      const double fc = f(xc);
      if (fc < fs[worst]) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  const auto best_it = std::min_element(fs.begin(), fs.end());
  res.x = xs[static_cast<size_t>(best_it - fs.begin())];
  res.f = *best_it;
  res.iters = it;
  res.converged = it < opt.max_iter;
  return res;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  double fa = f(a), fb = f(b);
  if (fa * fb > 0) throw std::invalid_argument("brent_root: interval does not bracket");
  if (std::abs(fa) < std::abs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa, s = b, fs = fb, d = 0.0;
  bool mflag = true;
  for (int it = 0; it < 200 && fb != 0.0 && std::abs(b - a) > tol; ++it) {
    if (fa != fc && fb != fc) {
      s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    const double lo = (3 * a + b) / 4;
    const bool cond = !((s > std::min(lo, b) && s < std::max(lo, b))) ||
                      (mflag && std::abs(s - b) >= std::abs(b - c) / 2) ||
                      (!mflag && std::abs(s - b) >= std::abs(c - d) / 2) ||
                      (mflag && std::abs(b - c) < tol) ||
                      (!mflag && std::abs(c - d) < tol);
    if (cond) {
      s = 0.5 * (a + b);
      mflag = true;
    } else {
      mflag = false;
    }
    fs = f(s);
    d = c;
    c = b;
    fc = fb;
    if (fa * fs < 0) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  return b;
}

LevenbergMarquardtResult levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
    const Eigen::VectorXd& x0, const LevenbergMarquardtOptions& opt) {
  LevenbergMarquardtResult out;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd r = residual(x);
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(r.size());
  double cost = r.squaredNorm();
  double lambda = opt.lambda0;

  Eigen::MatrixXd jac(m, n);
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    for (int j = 0; j < n; ++j) {
      const double h = opt.fd_step * std::max(1.0, std::abs(x(j)));
      Eigen::VectorXd xp = x;
      xp(j) += h;
      jac.col(j) = (residual(xp) - r) / h;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 50; ++tries) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd delta = a.ldlt().solve(-jtr);
      const Eigen::VectorXd xn = x + delta;
      const Eigen::VectorXd rn = residual(xn);
      const double cn = rn.squaredNorm();
      if (cn < cost) {
        const double df = cost - cn;
        const double dx = delta.cwiseAbs().maxCoeff();
        x = xn;
        r = rn;
        cost = cn;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        if (df < opt.ftol * std::max(1.0, cost) || dx < opt.xtol) {
          out.converged = true;
        }
        break;
      }
      lambda *= 3.0;
      if (lambda > 1e12) break;
    }
    if (!accepted || out.converged) {
      out.converged = out.converged || !accepted;
      break;
    }
  }

  out.x = x;
  out.residuals = r;
  out.iters = it;
  out.rms = m > 0 ? std::sqrt(cost / m) : 0.0;
  if (m > n) {
    for (int j = 0; j < n; ++j) {
      const double h = opt.fd_step * std::max(1.0, std::abs(x(j)));
      Eigen::VectorXd xp = x;
      xp(j) += h;
      jac.col(j) = (residual(xp) - r) / h;
    }
    const double s2 = cost / (m - n);
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    out.cov = s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
  } else {
    out.cov = Eigen::MatrixXd::Zero(n, n);
  }
  return out;
}

}  // namespace dcg
