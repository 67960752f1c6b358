#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "harmosyn/levy_measure.hpp"
#include "harmosyn/random_stream.hpp"
#include "harmosyn/spectrum.hpp"

namespace harmosyn {

struct HarmonicTerm {
  double amplitude;  // xi_i >= 0
  double frequency;  // lambda_i >= 0
  double phase;      // phi_i in [0, 2pi)
  /// Subordinator weight behind the amplitude: xi_i = sigma0 * sqrt(weight) * R_i
  /// (for the discrete construction xi_k = sqrt(2 * weight) * R_k).
  double weight;
};

enum class GenerationMethod { inverse_levy, gamma_shotnoise, conditioned, discrete, gaussian_limit };

std::string to_string(GenerationMethod method);
GenerationMethod generation_method_from_string(const std::string& name);

struct ExpansionMeta {
  GenerationMethod method = GenerationMethod::inverse_levy;
  double truncation = 0.0;  // L
  std::size_t conditioned_terms = 0;  // m, conditioned method only
  double sigma0 = 1.0;
  std::string measure;
  std::string frequency_law;
  std::uint64_t seed = 0;
  std::size_t arrivals = 0;  // N(L) before zero-weight terms were dropped
};

struct HarmonicExpansion {
  std::vector<HarmonicTerm> terms;
  ExpansionMeta meta;

  double amplitude_sum() const;
  double max_frequency() const;
};

struct SignalPath {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;
  ExpansionMeta provenance;

  double time(std::size_t j) const { return t0 + static_cast<double>(j) * dt; }
  std::size_t size() const { return values.size(); }
};

/// Phases are uniform on [0, phase_span). Anything other than 2pi breaks
/// strict stationarity; only the stationarity witness uses it.
struct GenerationOptions {
  double phase_span = 2.0 * std::numbers::pi;
};

/// Inverse Levy measure series truncated at arrivals <= L:
/// xi_i = sigma0 sqrt(Lambda^{-1}(Gamma_i)) R_i, lambda_i = F^{-1}(U_i').
HarmonicExpansion generate_inverse_levy(const LevyMeasure& measure, const SpectralDistribution& spec,
                                        double truncation, std::uint64_t seed,
                                        const GenerationOptions& options = {});

/// Gamma shot-noise series: xi_i = sigma0 sqrt(nu) e^{-nu Gamma_i / 2} sqrt(V_i) R_i.
HarmonicExpansion generate_gamma_shotnoise(double nu, const SpectralDistribution& spec, double truncation,
                                           std::uint64_t seed, const GenerationOptions& options = {});

enum class ConditionedVariant { inverse_levy, gamma_shotnoise };

/// Exactly m i.i.d. harmonics: the series conditioned on N(L) = m.
///   inverse_levy:    xi = sigma0 sqrt(Lambda^{-1}(L U_i)) R_i
///   gamma_shotnoise: xi = sigma0 sqrt(nu) ((e^{-U_i})^{L nu} V_i)^{1/2} R_i, nu from the gamma measure
HarmonicExpansion generate_conditioned(std::size_t m, double truncation, const LevyMeasure& measure,
                                       const SpectralDistribution& spec, std::uint64_t seed,
                                       ConditionedVariant variant = ConditionedVariant::inverse_levy,
                                       const GenerationOptions& options = {});

/// Draws the subordinator increment Y over frequency mass `weight`, with
/// E Y = weight. The increment over atom k is G_k = (sigma0^2/2) * Y_k.
using SubordinatorSampler = std::function<double(double weight, RandomStream& stream)>;

SubordinatorSampler deterministic_subordinator();
/// Exact gamma increments: Y ~ Gamma(shape weight/nu, scale nu).
SubordinatorSampler gamma_subordinator(double nu);
/// Inverse Levy series for the measure weight * Lambda, truncated so that
/// the retained first-moment fraction is at least `retained`.
SubordinatorSampler levy_subordinator(const LevyMeasure& measure, double retained = 1.0 - 1e-6);

/// Fixed frequencies l_k with xi_k = sqrt(2 G_k) R_k.
HarmonicExpansion generate_discrete(const SpectralDistribution& spec, const SubordinatorSampler& sampler,
                                    std::uint64_t seed, const GenerationOptions& options = {});

/// X_L / sqrt(L) built from the measure L * Lambda. `base_truncation` is
/// the arrival level for the unscaled measure (default: retained 1 - 1e-3);
/// the scaled series keeps arrivals up to L * base_truncation.
HarmonicExpansion generate_gaussian_limit(const LevyMeasure& measure, const SpectralDistribution& spec,
                                          double scale, std::uint64_t seed,
                                          std::optional<double> base_truncation = std::nullopt,
                                          const GenerationOptions& options = {});

/// values[j] = sum_i xi_i cos(lambda_i (t0 + j dt) + phi_i).
SignalPath evaluate(const HarmonicExpansion& expansion, double t0, double dt, std::size_t n);
double evaluate_at(const HarmonicExpansion& expansion, double t);

/// Variance of the terms discarded by the shot-noise truncation at L:
/// sigma0^2 e^{-nu L}.
double shotnoise_residual_variance(double nu, double sigma0, double truncation);
/// Smallest L with shot-noise residual fraction e^{-nu L} <= 1 - retained.
double shotnoise_truncation_level(double nu, double retained = 1.0 - 1e-3);

}  // namespace harmosyn
