#pragma once

#include <Eigen/Dense>
#include <functional>

namespace dcg {

struct NelderMeadOptions {
  double xtol = 1e-10;
  double ftol = 1e-14;
  int max_iter = 2000;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iters = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                             const NelderMeadOptions& opt = {});

// Minimum of a unimodal function on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-8);

// Root of f on a bracketing interval [a, b] (f(a) and f(b) of opposite sign).
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-13);

struct LevenbergMarquardtOptions {
  int max_iter = 200;
  double ftol = 1e-14;
  double xtol = 1e-12;
  double lambda0 = 1e-3;
  double fd_step = 1e-7;  // relative forward-difference step
};

struct LevenbergMarquardtResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd cov;  // sigma^2 (J^T J)^-1 at the solution
  double rms = 0.0;
  int iters = 0;
  bool converged = false;
};

LevenbergMarquardtResult levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
    const Eigen::VectorXd& x0, const LevenbergMarquardtOptions& opt = {});

}  // namespace dcg
