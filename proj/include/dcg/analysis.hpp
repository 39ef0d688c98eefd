#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcg/pulse.hpp"
#include "dcg/qcore.hpp"
#include "dcg/sim.hpp"

namespace dcg {

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Envelope { gaussian, exponential };

struct RamseyFit {
  double a = 0.0;
  double f_mhz = 0.0;
  double phi_rad = 0.0;
  double t2_ns = 0.0;
  double b = 0.0;
  double rms = 0.0;
  bool converged = false;
};

// A cos(2 pi f t + phi) env(t) + B with a Gaussian or exponential envelope.
// The frequency is seeded by a spectral scan; a series with no detectable
// oscillation throws FitError.
RamseyFit fit_ramsey(const Eigen::VectorXd& t_ns, const Eigen::VectorXd& y,
                     Envelope env = Envelope::gaussian);

struct ExchangeFit {
  double j0_mhz = 0.0;
  double v0_mv = 0.0;
  double dez_mhz = 0.0;
  double rms = 0.0;
  double condition = 0.0;  // of the normal matrix at the solution
  bool ill_conditioned = false;
};

// Fit f(V) = sqrt(J0^2 exp(2 V / V0) + dEz^2) to oscillation frequencies.
// Data covering only one asymptote leaves a parameter free and is flagged.
ExchangeFit fit_exchange_model(const Eigen::VectorXd& v_mv,
                               const Eigen::VectorXd& f_mhz);

struct LinecutErrorbar {
  double sigma = 0.0;  // residual spread about a quartic trend, ddof = n - 5
  Eigen::VectorXd residuals;
  double qq_correlation = 0.0;  // sorted residuals vs normal plotting positions
};

// Statistical error of a fidelity linecut: remove a smooth quartic trend and
// report the residual spread plus a normality check.
LinecutErrorbar linecut_errorbar(const Eigen::VectorXd& x, const Eigen::VectorXd& f);

struct ScatterStats {
  std::string label;
  double mean = 0.0;
  double stddev = 0.0;  // across batch means, ddof = 1
  std::vector<double> values;
};

// Repeated Monte Carlo batches (distinct derived seeds) of the same distorted
// waveform under gradient-only, exchange-only, and combined noise.
std::vector<ScatterStats> fidelity_scatter(const Waveform& w, double dez_mhz,
                                           const Mat2& target, const NoiseSpec& noise,
                                           int repeats, uint64_t seed, int workers = 1);

}  // namespace dcg
