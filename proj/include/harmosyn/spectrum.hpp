#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "harmosyn/quadrature.hpp"

namespace harmosyn {

struct FrequencyAtom {
  double location;  // l_k >= 0
  double weight;    // nu_k > 0, weights sum to one
};

struct QuantilePoint {
  double u;
  double lambda;
};

enum class FrequencyKind { uniform, exponential, atoms, table, custom };

/// Law of the harmonic frequencies, held as a quantile function so one
/// representation serves both sampling and integration over frequencies.
class FrequencyDistribution {
 public:
  static FrequencyDistribution uniform(double a, double b);
  static FrequencyDistribution exponential(double rate);
  static FrequencyDistribution atoms(std::vector<FrequencyAtom> atoms);
  /// Piecewise-linear quantile through (u, lambda) points; u must run from 0 to 1.
  static FrequencyDistribution table(std::vector<QuantilePoint> points);
  /// Arbitrary continuous law. `second_moment` may be +inf.
  static FrequencyDistribution custom(std::string name, std::function<double(double)> quantile,
                                      std::function<double(double)> cdf, double second_moment);

  FrequencyKind kind() const;
  bool is_discrete() const { return kind() == FrequencyKind::atoms; }

  double quantile(double u) const;
  double cdf(double lambda) const;
  /// Largest frequency in the support (+inf for unbounded laws).
  double support_max() const;
  /// E lambda^2.
  double second_moment() const;

  const std::vector<FrequencyAtom>& atom_list() const;
  double uniform_lower() const;
  double uniform_upper() const;
  double exponential_rate() const;
  const std::vector<QuantilePoint>& quantile_points() const;

  /// E phi(lambda): a weighted sum for atoms, otherwise the integral of
  /// phi(quantile(u)) over u in (0,1), split at the quantile's kinks.
  double expect(const std::function<double(double)>& phi, const QuadratureOptions& options = {}) const;

  std::string describe() const;

 private:
  struct Impl;
  explicit FrequencyDistribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// F(0, lambda] = sigma0^2/2 * F_lambda(lambda).
struct SpectralDistribution {
  SpectralDistribution(double sigma0, FrequencyDistribution freq);

  double sigma0;
  FrequencyDistribution freq;

  double total_mass() const { return 0.5 * sigma0 * sigma0; }
};

double quantile(const FrequencyDistribution& freq, double u);
double spectral_cdf(const SpectralDistribution& spec, double lambda);

}  // namespace harmosyn
