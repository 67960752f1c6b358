#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "harmosyn/statistics.hpp"
#include "harmosyn/synthesis.hpp"

namespace harmosyn {

/// Trapezoidal (1/T) int_0^T X(t) dt with T = (n-1) dt.
double time_average_mean(const SignalPath& path);

/// Trapezoidal (1/T') int_0^{T'} X(t) X(t+tau) dt, T' = T - tau.
/// tau must be a non-negative multiple of dt and below T/2.
double time_average_acov(const SignalPath& path, double tau);

/// sum_i xi_i^2 cos(lambda_i tau) / 2, the almost sure limit of the time
/// average for this realization.
double random_limit_acov(const HarmonicExpansion& expansion, double tau);

/// Kay's variance of the sample autocorrelation for m random harmonics:
///   e4/m + e4 r_2t / (m e2) - r_t^2 / m.
double kay_variance(double e4, double e2, long m, double r_t, double r_2t);

/// Variance of sum_i xi_i^2 cos(lambda_i t) / 2 for m i.i.d. harmonics with
/// Kay's sqrt(2/m) amplitude scaling:
///   e4/(2m) + e4 r_2t / (2m e2) - r_t^2 / m.
/// This is the T -> infinity variance of the time-average autocorrelation.
double harmonic_limit_variance(double e4, double e2, long m, double r_t, double r_2t);

/// Largest grid step allowed for an expansion: 0.2 / lambda_max.
double max_time_step(const HarmonicExpansion& expansion);

struct TimeAverageReport {
  double horizon = 0.0;  // T
  std::vector<double> taus;
  double time_avg_mean = 0.0;
  std::vector<double> time_avg_acov;
  std::vector<double> predicted_random_limit;
  std::vector<double> abs_error;
};

/// Evaluates the expansion on [0, T] with step dt and compares time averages
/// with the random limits. Throws DomainError if dt is too coarse for the
/// realized frequencies.
TimeAverageReport time_average_report(const HarmonicExpansion& expansion, double horizon, double dt,
                                      const std::vector<double>& taus);
TimeAverageReport time_average_report(const HarmonicExpansion& expansion, const SignalPath& path,
                                      const std::vector<double>& taus);

using ExpansionGenerator = std::function<HarmonicExpansion(std::uint64_t seed)>;

struct EnsembleOptions {
  std::size_t realizations = 200;
  std::uint64_t seed = 1;
  std::vector<double> taus{0.0};
  /// When positive, time averages over [0, horizon] are computed as well.
  double horizon = 0.0;
  double dt = 0.05;
  std::vector<double> u_grid;
  unsigned jobs = 0;
};

struct EnsembleReport {
  std::size_t realizations = 0;
  std::vector<double> taus;
  std::vector<double> limit_mean;      // per tau, mean of random_limit_acov
  std::vector<double> limit_variance;  // per tau, cross-realization variance
  std::vector<double> time_avg_mean;      // empty unless horizon > 0
  std::vector<double> time_avg_variance;  // empty unless horizon > 0
  double x0_mean = 0.0;
  double x0_variance = 0.0;
  double x0_excess_kurtosis = 0.0;
  TestResult x0_normality;  // KS against the normal with fitted mean and variance
  std::vector<double> u_grid;
  std::vector<double> ecf_real;
  std::vector<double> ecf_imag;
};

/// Simulates independent realizations (seed derive_seed(options.seed, r)
/// for realization r) and reduces per-realization statistics.
EnsembleReport ensemble_diagnostics(const ExpansionGenerator& generator, const EnsembleOptions& options);

}  // namespace harmosyn
