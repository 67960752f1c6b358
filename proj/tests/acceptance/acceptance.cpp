// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "harmosyn/charfn.hpp"
#include "harmosyn/cli.hpp"
#include "harmosyn/ergodics.hpp"
#include "harmosyn/random_stream.hpp"
#include "harmosyn/serialization.hpp"
#include "harmosyn/statistics.hpp"

using namespace harmosyn;

namespace {

const double kSigma0 = std::sqrt(3.0);

SpectralDistribution unit_uniform_spectrum(double sigma0 = kSigma0) {
  return SpectralDistribution(sigma0, FrequencyDistribution::uniform(0.0, 1.0));
}

// gamma nu = 1.5 with f_total = 1.5: marginal cf 1/(1 + 1.5 u^2).
HarmonizableModel laplace_model() { return {laplace_levy_measure(1.5, kSigma0), unit_uniform_spectrum()}; }

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] criterion %d: %s | %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome marginal_law() {
  const HarmonizableModel model = laplace_model();
  const double L = retained_truncation_level(model.measure, 0.999);
  const std::size_t n = 100000;
  std::vector<double> x(n);
  parallel_for(n, default_jobs(), [&](std::size_t r) {
    x[r] = evaluate_at(generate_inverse_levy(model.measure, model.spectrum, L, derive_seed(101, r)), 0.0);
  });
  std::vector<double> u;
  for (int k = -500; k <= 500; ++k) u.push_back(0.01 * k);
  const auto ecf = empirical_cf(x, u);
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    worst = std::max(worst, std::abs(ecf[k] - std::complex<double>(laplace_marginal_cf(u[k], 1.5, 1.5), 0.0)));
  return {worst <= 0.02, fmt("sup|ecf - cf| = %.4f (limit 0.02), L = %.3f", worst, L)};
}

Outcome figures() {
  RunConfig config;
  config.model.sigma0 = kSigma0;
  config.model.measure.kind = "gamma";
  config.model.measure.nu = 1.0;
  config.generation.seed = 7;
  config.grid = {0.0, 0.05, 2000};
  config.analysis.figure_paths = 50;
  config.analysis.bins = 20;
  validate(config);
  const FigureData fig = compute_figures(config);
  const bool pass = fig.pooled.corrected.p_value > 0.01;
  return {pass, fmt("pooled 50x2000 p = %.3g (second-order Rao-Scott, deff %.1f; naive p = %.2g); "
                    "single path p = %.2g (%s at 1%%)",
                    fig.pooled.corrected.p_value, fig.pooled.design_effect, fig.pooled.naive.p_value,
                    fig.single.p_value, fig.single.rejected(0.01) ? "rejected" : "not rejected")};
}

Outcome cf_crosscheck() {
  const HarmonizableModel model = laplace_model();
  const std::vector<double> times{0.0, 1.0};
  double worst = 0.0;
  for (double u1 : {-2.0, -1.0, 0.0, 1.0, 2.0})
    for (double u2 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const std::vector<double> u{u1, u2};
      worst = std::max(worst, std::abs(fdd_cf(u, times, model) - laplace_fdd_cf(u, times, 1.5, model.spectrum)));
    }
  return {worst <= 1e-6, fmt("max |diff| = %.2e (limit 1e-6)", worst)};
}

Outcome bochner() {
  const SpectralDistribution spec = unit_uniform_spectrum();
  const double nu = 1.0;
  const double L = shotnoise_truncation_level(nu, 1.0 - 1e-6);
  const std::vector<double> taus{0.0, 0.5, 1.0, 2.0};
  const std::size_t n = 20000;
  std::vector<std::vector<double>> prod(taus.size(), std::vector<double>(n));
  parallel_for(n, default_jobs(), [&](std::size_t r) {
    const HarmonicExpansion e = generate_gamma_shotnoise(nu, spec, L, derive_seed(404, r));
    const double x0 = evaluate_at(e, 0.0);
    for (std::size_t k = 0; k < taus.size(); ++k) prod[k][r] = x0 * evaluate_at(e, taus[k]);
  });
  bool pass = true;
  std::string detail;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const RunningMoments m = summarize(prod[k]);
    const double tau = taus[k];
    const double theory = autocovariance(tau, spec);
    const double sinc = tau == 0.0 ? 3.0 : 3.0 * std::sin(tau) / tau;
    const double z = std::abs(m.mean() - theory) / m.standard_error();
    const double z_sinc = std::abs(m.mean() - sinc) / m.standard_error();
    pass = pass && z <= 3.0 && z_sinc <= 3.0;
    detail += fmt("tau=%g: mc %.4f, C %.4f, |z| %.2f; ", tau, m.mean(), theory, std::max(z, z_sinc));
  }
  return {pass, detail};
}

Outcome time_average_limits() {
  const LevyMeasure measure = LevyMeasure::gamma(1.0);
  const SpectralDistribution spec = unit_uniform_spectrum();
  const double L = retained_truncation_level(measure);
  const std::vector<double> taus{0.0, 1.0, 2.0};
  const double dt = 0.05;
  double worst = 0.0;
  int improved = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const HarmonicExpansion e = generate_conditioned(8, L, measure, spec, derive_seed(505, s));
    const SignalPath full = evaluate(e, 0.0, dt, 40001);
    SignalPath prefix = full;
    prefix.values.resize(10001);
    const TimeAverageReport long_run = time_average_report(e, full, taus);
    const TimeAverageReport short_run = time_average_report(e, prefix, taus);
    const double err_long = *std::max_element(long_run.abs_error.begin(), long_run.abs_error.end());
    const double err_short = *std::max_element(short_run.abs_error.begin(), short_run.abs_error.end());
    worst = std::max(worst, err_long);
    improved += err_long < err_short;
  }
  const double limit = 0.05 * kSigma0 * kSigma0;
  return {worst < limit && improved >= 18,
          fmt("max error at T=2000: %.4f (limit %.3f); T=2000 beats T=500 in %d of 20 seeds (need 18)", worst, limit,
              improved)};
}

Outcome non_ergodicity() {
  const HarmonizableModel model = laplace_model();
  const double L = retained_truncation_level(model.measure, 1.0 - 1e-6);
  // The limit at 0 is a compound Poisson sum of sigma0^2 w E, E ~ Exp(1), so its
  // variance is 2 sigma0^4 int w^2 dLambda.
  const double oracle_sd = std::sqrt(2.0 * std::pow(kSigma0, 4) * model.measure.second_moment());
  RunningMoments mc;
  for (std::size_t r = 0; r < 20000; ++r)
    mc.add(random_limit_acov(generate_inverse_levy(model.measure, model.spectrum, L, derive_seed(606, r)), 0.0));
  const double threshold = 0.5 * oracle_sd;

  const ExpansionGenerator gen = [&](std::uint64_t seed) {
    return generate_inverse_levy(model.measure, model.spectrum, L, seed);
  };
  EnsembleOptions opt;
  opt.realizations = 200;
  opt.seed = 607;
  opt.taus = {0.0};
  const EnsembleReport a = ensemble_diagnostics(gen, opt);
  opt.horizon = 500.0;
  const EnsembleReport b = ensemble_diagnostics(gen, opt);
  const double sd = std::sqrt(a.limit_variance[0]);
  const bool invariant = a.limit_variance == b.limit_variance;
  const bool oracle_agrees = std::abs(std::sqrt(mc.variance()) - oracle_sd) < 0.1 * oracle_sd;
  return {sd > threshold && invariant && oracle_agrees,
          fmt("sd over 200 = %.3f > %.3f (oracle sd %.3f, MC sd %.3f); identical for T=0 and T=500: %s", sd,
              threshold, oracle_sd, std::sqrt(mc.variance()), invariant ? "yes" : "no")};
}

Outcome gaussian_limit() {
  const LevyMeasure measure = LevyMeasure::gamma(1.0);
  const SpectralDistribution spec = unit_uniform_spectrum();
  const std::size_t n = 100000;
  std::vector<double> kurt;
  std::string detail;
  for (double scale : {1.0, 10.0, 100.0}) {
    std::vector<double> x(n);
    parallel_for(n, default_jobs(), [&](std::size_t r) {
      x[r] = evaluate_at(generate_gaussian_limit(measure, spec, scale, derive_seed(707 + scale, r)), 0.0);
    });
    kurt.push_back(std::abs(summarize(x).excess_kurtosis()));
    detail += fmt("L=%g: |kurt| %.4f; ", scale, kurt.back());
  }
  const bool pass = kurt[0] > kurt[1] && kurt[1] > kurt[2] && kurt[2] < 0.15;
  return {pass, detail};
}

Outcome kay() {
  // Eight Rayleigh-amplitude harmonics: a unit atom makes the weight 1 for any
  // L, and sigma0 = sqrt(2/m) gives x = sqrt(2/m) sum R_i cos(...).
  const std::size_t m = 8;
  const LevyMeasure atom = LevyMeasure::atoms({{1.0, 1.0}});
  const SpectralDistribution spec(std::sqrt(2.0 / m), FrequencyDistribution::uniform(0.0, 1.0));
  const double dt = 0.05;
  const double t = 1.0;
  RunningMoments mc;
  for (std::uint64_t r = 0; r < 2000; ++r) {
    const HarmonicExpansion e = generate_conditioned(m, 1.0, atom, spec, derive_seed(808, r));
    mc.add(time_average_acov(evaluate(e, 0.0, dt, 10001), t));
  }
  const double e2 = 2.0;
  const double e4 = 8.0;
  const double r_t = e2 * std::sin(t) / t;
  const double r_2t = e2 * std::sin(2.0 * t) / (2.0 * t);
  const long mm = static_cast<long>(m);
  const double printed = kay_variance(e4, e2, mm, r_t, r_2t);
  const double corrected = harmonic_limit_variance(e4, e2, mm, r_t, r_2t);
  const double rel = std::abs(mc.variance() - printed) / printed;
  return {rel <= 0.15, fmt("MC variance %.4f vs kay_variance %.4f (rel err %.2f, limit 0.15); "
                           "half-weighted fourth-moment form gives %.4f",
                           mc.variance(), printed, rel, corrected)};
}

// Two-sample KS on projections of (X(a), X(a+tau)) at angles 0, 45, 90, 135
// degrees, Bonferroni over the four tests.
double stationarity_min_p(double phase_span, std::uint64_t seed) {
  const LevyMeasure measure = LevyMeasure::gamma(1.0);
  const SpectralDistribution spec = unit_uniform_spectrum();
  const double L = retained_truncation_level(measure);
  const double s = 1.3;
  const double tau = 1.0;
  const std::size_t n = 10000;
  GenerationOptions options;
  options.phase_span = phase_span;
  std::vector<double> a0(n), a1(n), b0(n), b1(n);
  parallel_for(n, default_jobs(), [&](std::size_t r) {
    const auto ea = generate_inverse_levy(measure, spec, L, derive_seed(seed, 2 * r), options);
    const auto eb = generate_inverse_levy(measure, spec, L, derive_seed(seed, 2 * r + 1), options);
    a0[r] = evaluate_at(ea, 0.0);
    a1[r] = evaluate_at(ea, tau);
    b0[r] = evaluate_at(eb, s);
    b1[r] = evaluate_at(eb, s + tau);
  });
  double min_p = 1.0;
  for (int k = 0; k < 4; ++k) {
    const double th = k * std::numbers::pi / 4.0;
    std::vector<double> pa(n), pb(n);
    for (std::size_t r = 0; r < n; ++r) {
      pa[r] = std::cos(th) * a0[r] + std::sin(th) * a1[r];
      pb[r] = std::cos(th) * b0[r] + std::sin(th) * b1[r];
    }
    min_p = std::min(min_p, ks_two_sample(pa, pb).p_value);
  }
  return min_p;
}

Outcome stationarity() {
  const double alpha = 0.01 / 4.0;
  const double p_uniform = stationarity_min_p(2.0 * std::numbers::pi, 909);
  const double p_skewed = stationarity_min_p(std::numbers::pi / 2.0, 910);
  return {p_uniform > alpha && p_skewed <= alpha,
          fmt("uniform phases: min p %.3g (accept); phases on [0, pi/2): min p %.2g (reject); per-test level %.4f",
              p_uniform, p_skewed, alpha)};
}

Outcome property_suites() {
  std::vector<std::string> broken;
  // Tail-inverse sandwich.
  for (const LevyMeasure& m : {LevyMeasure::gamma(1.0), LevyMeasure::gamma(GammaMeasureParams{1.5}),
                               LevyMeasure::atoms({{0.5, 2.0}, {1.0, 1.5}})}) {
    for (double g = 0.01; g < 3.4; g += 0.013) {
      const double x = m.tail_inverse(g);
      if (x <= 0.0) continue;
      if (!(m.tail(x) >= g * (1.0 - 1e-9)) || !(m.tail(x * (1.0 + 1e-6)) <= g * (1.0 + 1e-9))) {
        broken.push_back("sandwich " + m.describe());
        break;
      }
    }
  }
  // CF bounds and evenness.
  const HarmonizableModel model = laplace_model();
  for (double u = 0.0; u <= 6.0; u += 0.5) {
    const double c = marginal_cf(u, model);
    if (!(std::abs(c) <= 1.0 + 1e-12) || std::abs(c - marginal_cf(-u, model)) > 1e-12) broken.push_back("cf bounds");
  }
  if (std::abs(marginal_cf(0.0, model) - 1.0) > 1e-12) broken.push_back("cf at 0");
  // Coupled truncation: the lower level gives a prefix of the higher one.
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto lo = generate_inverse_levy(model.measure, model.spectrum, 2.0, s);
    const auto hi = generate_inverse_levy(model.measure, model.spectrum, 6.0, s);
    if (lo.terms.size() > hi.terms.size() ||
        !std::equal(lo.terms.begin(), lo.terms.end(), hi.terms.begin(), [](const auto& a, const auto& b) {
          return a.amplitude == b.amplitude && a.frequency == b.frequency && a.phase == b.phase;
        }))
      broken.push_back("prefix");
  }
  // Byte-identical replay.
  const auto p1 = evaluate(generate_inverse_levy(model.measure, model.spectrum, 7.0, 42), 0.0, 0.05, 2000);
  const auto p2 = evaluate(generate_inverse_levy(model.measure, model.spectrum, 7.0, 42), 0.0, 0.05, 2000);
  if (std::memcmp(p1.values.data(), p2.values.data(), p1.values.size() * sizeof(double)) != 0)
    broken.push_back("replay");
  if (path_table(p1).render() != path_table(p2).render()) broken.push_back("replay csv");
  std::string detail = broken.empty() ? "sandwich, cf bounds/evenness, prefix, replay all hold" : "broken:";
  for (const auto& b : broken) detail += " " + b;
  return {broken.empty(), detail + "; full suites run as the unit_tests target"};
}

}  // namespace

int main() {
  report(1, "marginal law", marginal_law);
  report(2, "figure histograms", figures);
  report(3, "cf cross-check", cf_crosscheck);
  report(4, "autocovariance consistency", bochner);
  report(5, "time-average limits", time_average_limits);
  report(6, "non-ergodicity", non_ergodicity);
  report(7, "Gaussian limit", gaussian_limit);
  report(8, "Kay variance", kay);
  report(9, "strict stationarity", stationarity);
  report(10, "property suites", property_suites);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
