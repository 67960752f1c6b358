#include "harmosyn/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "harmosyn/errors.hpp"

namespace harmosyn {
namespace {

double draw_phase(RandomStream& stream, const GenerationOptions& options) {
  const double span = options.phase_span;
  const double p = span * stream.uniform01();
  return p < span ? p : 0.0;
}

void check_truncation(double truncation, const char* where) {
  if (!(truncation > 0.0) || !std::isfinite(truncation))
    throw DomainError(std::string(where) + ": truncation level must be positive and finite");
}

void check_options(const GenerationOptions& options) {
  if (!(options.phase_span > 0.0 && options.phase_span <= 2.0 * std::numbers::pi))
    throw DomainError("generation: phase span must lie in (0, 2pi]");
}

ExpansionMeta make_meta(GenerationMethod method, double truncation, const SpectralDistribution& spec,
                        std::string measure, std::uint64_t seed) {
  ExpansionMeta meta;
  meta.method = method;
  meta.truncation = truncation;
  meta.sigma0 = spec.sigma0;
  meta.measure = std::move(measure);
  meta.frequency_law = spec.freq.describe();
  meta.seed = seed;
  return meta;
}

}  // namespace

std::string to_string(GenerationMethod method) {
  switch (method) {
    case GenerationMethod::inverse_levy: return "inverse_levy";
    case GenerationMethod::gamma_shotnoise: return "gamma_shotnoise";
    case GenerationMethod::conditioned: return "conditioned";
    case GenerationMethod::discrete: return "discrete";
    case GenerationMethod::gaussian_limit: return "gaussian_limit";
  }
  return "unknown";
}

GenerationMethod generation_method_from_string(const std::string& name) {
  for (auto m : {GenerationMethod::inverse_levy, GenerationMethod::gamma_shotnoise, GenerationMethod::conditioned,
                 GenerationMethod::discrete, GenerationMethod::gaussian_limit}) {
    if (to_string(m) == name) return m;
  }
  throw DomainError("unknown generation method '" + name + "'");
}

double HarmonicExpansion::amplitude_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.amplitude;
  return s;
}

double HarmonicExpansion::max_frequency() const {
  double m = 0.0;
  for (const auto& t : terms) m = std::max(m, t.frequency);
  return m;
}

HarmonicExpansion generate_inverse_levy(const LevyMeasure& measure, const SpectralDistribution& spec,
                                        double truncation, std::uint64_t seed, const GenerationOptions& options) {
  check_truncation(truncation, "generate_inverse_levy");
  check_options(options);
  StreamBundle streams(seed);
  const ArrivalSequence arrivals = poisson_arrivals(streams.arrivals, truncation);

  HarmonicExpansion out;
  out.meta = make_meta(GenerationMethod::inverse_levy, truncation, spec, measure.describe(), seed);
  out.meta.arrivals = arrivals.count();
  out.terms.reserve(arrivals.count());
  for (double g : arrivals.arrivals) {
    // Every arrival consumes its draws so that truncations share a prefix.
    const double weight = measure.tail_inverse(g);
    const double lambda = spec.freq.quantile(streams.frequency.uniform01());
    const double r = streams.amplitude.rayleigh();
    const double phi = draw_phase(streams.phase, options);
    if (weight > 0.0) out.terms.push_back({spec.sigma0 * std::sqrt(weight) * r, lambda, phi, weight});
  }
  return out;
}

HarmonicExpansion generate_gamma_shotnoise(double nu, const SpectralDistribution& spec, double truncation,
                                           std::uint64_t seed, const GenerationOptions& options) {
  if (!(nu > 0.0)) throw DomainError("generate_gamma_shotnoise: nu must be positive");
  check_truncation(truncation, "generate_gamma_shotnoise");
  check_options(options);
  StreamBundle streams(seed);
  const ArrivalSequence arrivals = poisson_arrivals(streams.arrivals, truncation);

  HarmonicExpansion out;
  out.meta = make_meta(GenerationMethod::gamma_shotnoise, truncation, spec,
                       LevyMeasure::gamma(nu).describe(), seed);
  out.meta.arrivals = arrivals.count();
  out.terms.reserve(arrivals.count());
  for (double g : arrivals.arrivals) {
    const double v = streams.shot.exponential();
    const double weight = nu * v * std::exp(-nu * g);
    const double lambda = spec.freq.quantile(streams.frequency.uniform01());
    const double r = streams.amplitude.rayleigh();
    const double phi = draw_phase(streams.phase, options);
    out.terms.push_back({spec.sigma0 * std::sqrt(weight) * r, lambda, phi, weight});
  }
  return out;
}

HarmonicExpansion generate_conditioned(std::size_t m, double truncation, const LevyMeasure& measure,
                                       const SpectralDistribution& spec, std::uint64_t seed,
                                       ConditionedVariant variant, const GenerationOptions& options) {
  if (m < 1) throw DomainError("generate_conditioned: m must be at least 1");
  check_truncation(truncation, "generate_conditioned");
  check_options(options);
  double nu = 0.0;
  if (variant == ConditionedVariant::gamma_shotnoise) {
    if (measure.kind() != MeasureKind::gamma || measure.gamma_params().form != GammaTailForm::scaled_argument)
      throw DomainError("generate_conditioned: shot-noise variant needs a gamma measure");
    nu = measure.gamma_params().nu;
  }
  StreamBundle streams(seed);
  HarmonicExpansion out;
  out.meta = make_meta(GenerationMethod::conditioned, truncation, spec, measure.describe(), seed);
  out.meta.conditioned_terms = m;
  out.meta.arrivals = m;
  out.terms.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = streams.uniform.uniform01();
    double weight;
    if (variant == ConditionedVariant::inverse_levy) {
      weight = measure.tail_inverse(truncation * u);
    } else {
      weight = nu * std::exp(-truncation * nu * u) * streams.shot.exponential();
    }
    const double lambda = spec.freq.quantile(streams.frequency.uniform01());
    const double r = streams.amplitude.rayleigh();
    const double phi = draw_phase(streams.phase, options);
    out.terms.push_back({spec.sigma0 * std::sqrt(weight) * r, lambda, phi, weight});
  }
  return out;
}

SubordinatorSampler deterministic_subordinator() {
  return [](double weight, RandomStream&) { return weight; };
}

SubordinatorSampler gamma_subordinator(double nu) {
  if (!(nu > 0.0)) throw DomainError("gamma_subordinator: nu must be positive");
  return [nu](double weight, RandomStream& stream) {
    std::gamma_distribution<double> law(weight / nu, nu);
    return law(stream.engine());
  };
}

SubordinatorSampler levy_subordinator(const LevyMeasure& measure, double retained) {
  const double base_level = retained_truncation_level(measure, retained);
  return [measure, base_level](double weight, RandomStream& stream) {
    // Jumps of weight * Lambda are Lambda^{-1}(Gamma / weight).
    double sum = 0.0;
    for (double g = stream.exponential(); g <= weight * base_level; g += stream.exponential()) {
      sum += measure.tail_inverse(g / weight);
    }
    return sum;
  };
}

HarmonicExpansion generate_discrete(const SpectralDistribution& spec, const SubordinatorSampler& sampler,
                                    std::uint64_t seed, const GenerationOptions& options) {
  if (!spec.freq.is_discrete()) throw DomainError("generate_discrete: frequency law must be discrete");
  check_options(options);
  StreamBundle streams(seed);
  HarmonicExpansion out;
  out.meta = make_meta(GenerationMethod::discrete, 0.0, spec, "subordinator", seed);
  const double mass = spec.total_mass();
  for (const auto& atom : spec.freq.atom_list()) {
    const double g = mass * sampler(atom.weight, streams.subordinator);
    const double r = streams.amplitude.rayleigh();
    const double phi = draw_phase(streams.phase, options);
    out.terms.push_back({std::sqrt(2.0 * g) * r, atom.location, phi, g});
  }
  out.meta.arrivals = out.terms.size();
  return out;
}

HarmonicExpansion generate_gaussian_limit(const LevyMeasure& measure, const SpectralDistribution& spec,
                                          double scale, std::uint64_t seed, std::optional<double> base_truncation,
                                          const GenerationOptions& options) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("generate_gaussian_limit: L must be positive");
  const double base_level = base_truncation ? *base_truncation : retained_truncation_level(measure);
  HarmonicExpansion out =
      generate_inverse_levy(measure.scale(scale), spec, scale * base_level, seed, options);
  const double shrink = 1.0 / std::sqrt(scale);
  for (auto& t : out.terms) {
    t.amplitude *= shrink;
    t.weight /= scale;
  }
  out.meta.method = GenerationMethod::gaussian_limit;
  out.meta.truncation = scale;
  return out;
}

SignalPath evaluate(const HarmonicExpansion& expansion, double t0, double dt, std::size_t n) {
  if (n < 1) throw DomainError("evaluate: n must be at least 1");
  if (!(dt > 0.0)) throw DomainError("evaluate: dt must be positive");
  SignalPath path;
  path.t0 = t0;
  path.dt = dt;
  path.provenance = expansion.meta;
  path.values.assign(n, 0.0);
  for (const auto& term : expansion.terms) {
    if (term.amplitude == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = t0 + static_cast<double>(j) * dt;
      path.values[j] += term.amplitude * std::cos(term.frequency * t + term.phase);
    }
  }
  return path;
}

double evaluate_at(const HarmonicExpansion& expansion, double t) {
  double x = 0.0;
  for (const auto& term : expansion.terms) x += term.amplitude * std::cos(term.frequency * t + term.phase);
  return x;
}

double shotnoise_residual_variance(double nu, double sigma0, double truncation) {
  if (!(nu > 0.0) || !(truncation >= 0.0)) throw DomainError("shotnoise_residual_variance: invalid parameters");
  return sigma0 * sigma0 * std::exp(-nu * truncation);
}

double shotnoise_truncation_level(double nu, double retained) {
  if (!(nu > 0.0) || !(retained > 0.0 && retained < 1.0))
    throw DomainError("shotnoise_truncation_level: invalid parameters");
  return -std::log1p(-retained) / nu;
}

}  // namespace harmosyn
