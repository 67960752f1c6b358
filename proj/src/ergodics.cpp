#include "harmosyn/ergodics.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <sstream>

#include "harmosyn/errors.hpp"

namespace harmosyn {
namespace {

std::size_t grid_lag(const SignalPath& path, double tau) {
  if (!(path.dt > 0.0)) throw DomainError("time average: path step must be positive");
  if (tau < 0.0) throw DomainError("time_average_acov: tau must be non-negative");
  const double steps = tau / path.dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    std::ostringstream msg;
    msg << "time_average_acov: tau=" << tau << " is not a multiple of dt=" << path.dt;
    throw DomainError(msg.str());
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

double time_average_mean(const SignalPath& path) {
  const std::size_t n = path.size();
  if (n < 2) throw DomainError("time_average_mean: path needs at least two samples");
  double sum = 0.5 * (path.values.front() + path.values.back());
  for (std::size_t j = 1; j + 1 < n; ++j) sum += path.values[j];
  return sum / static_cast<double>(n - 1);
}

double time_average_acov(const SignalPath& path, double tau) {
  const std::size_t n = path.size();
  if (n < 2) throw DomainError("time_average_acov: path needs at least two samples");
  const std::size_t k = grid_lag(path, tau);
  const std::size_t intervals = n - 1;
  if (2 * k >= intervals) {
    std::ostringstream msg;
    msg << "time_average_acov: tau=" << tau << " must be below T/2=" << 0.5 * path.dt * intervals;
    throw DomainError(msg.str());
  }
  const std::size_t m = intervals - k;  // intervals in [0, T']
  const auto& x = path.values;
  double sum = 0.5 * (x[0] * x[k] + x[m] * x[m + k]);
  for (std::size_t j = 1; j < m; ++j) sum += x[j] * x[j + k];
  return sum / static_cast<double>(m);
}

double random_limit_acov(const HarmonicExpansion& expansion, double tau) {
  double sum = 0.0;
  for (const auto& term : expansion.terms) sum += term.amplitude * term.amplitude * std::cos(term.frequency * tau);
  return 0.5 * sum;
}

double kay_variance(double e4, double e2, long m, double r_t, double r_2t) {
  if (!(e2 > 0.0) || e4 < e2 * e2 || m < 1) throw DomainError("kay_variance: need e4 >= e2^2 > 0 and m >= 1");
  const double md = static_cast<double>(m);
  return e4 / md + e4 * r_2t / (md * e2) - r_t * r_t / md;
}

double harmonic_limit_variance(double e4, double e2, long m, double r_t, double r_2t) {
  if (!(e2 > 0.0) || e4 < e2 * e2 || m < 1)
    throw DomainError("harmonic_limit_variance: need e4 >= e2^2 > 0 and m >= 1");
  const double md = static_cast<double>(m);
  return e4 / (2.0 * md) + e4 * r_2t / (2.0 * md * e2) - r_t * r_t / md;
}

double max_time_step(const HarmonicExpansion& expansion) {
  const double lmax = expansion.max_frequency();
  return lmax > 0.0 ? 0.2 / lmax : std::numeric_limits<double>::infinity();
}

TimeAverageReport time_average_report(const HarmonicExpansion& expansion, const SignalPath& path,
                                      const std::vector<double>& taus) {
  if (path.dt > max_time_step(expansion) * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time_average_report: dt=" << path.dt << " exceeds 0.2/lambda_max=" << max_time_step(expansion);
    throw DomainError(msg.str());
  }
  TimeAverageReport report;
  report.horizon = path.dt * static_cast<double>(path.size() - 1);
  report.taus = taus;
  report.time_avg_mean = time_average_mean(path);
  for (double tau : taus) {
    const double avg = time_average_acov(path, tau);
    const double lim = random_limit_acov(expansion, tau);
    report.time_avg_acov.push_back(avg);
    report.predicted_random_limit.push_back(lim);
    report.abs_error.push_back(std::abs(avg - lim));
  }
  return report;
}

TimeAverageReport time_average_report(const HarmonicExpansion& expansion, double horizon, double dt,
                                      const std::vector<double>& taus) {
  if (!(horizon > 0.0) || !(dt > 0.0)) throw DomainError("time_average_report: horizon and dt must be positive");
  const auto n = static_cast<std::size_t>(std::llround(horizon / dt)) + 1;
  return time_average_report(expansion, evaluate(expansion, 0.0, dt, n), taus);
}

EnsembleReport ensemble_diagnostics(const ExpansionGenerator& generator, const EnsembleOptions& options) {
  if (options.realizations < 2) throw DomainError("ensemble_diagnostics: need at least two realizations");
  const std::size_t nr = options.realizations;
  const std::size_t nt = options.taus.size();
  const bool with_time = options.horizon > 0.0;

  std::vector<double> x0(nr);
  std::vector<std::vector<double>> limits(nr);
  std::vector<std::vector<double>> averages(nr);
  parallel_for(nr, options.jobs, [&](std::size_t r) {
    const HarmonicExpansion expansion = generator(derive_seed(options.seed, r));
    x0[r] = evaluate_at(expansion, 0.0);
    limits[r].reserve(nt);
    for (double tau : options.taus) limits[r].push_back(random_limit_acov(expansion, tau));
    if (with_time) averages[r] = time_average_report(expansion, options.horizon, options.dt, options.taus).time_avg_acov;
  });

  EnsembleReport report;
  report.realizations = nr;
  report.taus = options.taus;
  for (std::size_t k = 0; k < nt; ++k) {
    RunningMoments lim;
    RunningMoments avg;
    for (std::size_t r = 0; r < nr; ++r) {
      lim.add(limits[r][k]);
      if (with_time) avg.add(averages[r][k]);
    }
    report.limit_mean.push_back(lim.mean());
    report.limit_variance.push_back(lim.variance());
    if (with_time) {
      report.time_avg_mean.push_back(avg.mean());
      report.time_avg_variance.push_back(avg.variance());
    }
  }

  const RunningMoments m0 = summarize(x0);
  report.x0_mean = m0.mean();
  report.x0_variance = m0.variance();
  report.x0_excess_kurtosis = m0.excess_kurtosis();
  if (m0.variance() > 0.0) {
    const boost::math::normal_distribution<double> fitted(m0.mean(), std::sqrt(m0.variance()));
    report.x0_normality = ks_one_sample(x0, [&](double x) { return boost::math::cdf(fitted, x); });
  }
  report.u_grid = options.u_grid;
  if (!options.u_grid.empty()) {
    for (const auto& c : empirical_cf(x0, options.u_grid)) {
      report.ecf_real.push_back(c.real());
      report.ecf_imag.push_back(c.imag());
    }
  }
  return report;
}

}  // namespace harmosyn
