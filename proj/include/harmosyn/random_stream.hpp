#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace harmosyn {

enum class VariateKind { uniform01, rayleigh, exponential, normal, phase };

/// Seeded, labeled source of primitive variates.
///
/// The engine state is derived from (seed, label) only, so two streams with
/// the same pair replay bit-identical sequences and streams with different
/// labels are decorrelated. A stream has a single owner; ensembles create one
/// bundle per realization.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view label);

  /// Uniform on the open interval (0,1).
  double uniform01();
  /// -ln u, unit mean.
  double exponential();
  /// sqrt(-2 ln u), density r exp(-r^2/2).
  double rayleigh();
  double normal();
  /// Uniform on [0, 2pi).
  double phase();

  double draw(VariateKind kind);

  std::mt19937_64& engine() { return engine_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::string label_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// Inversion maps used by RandomStream, exposed for direct checks.
double rayleigh_from_uniform(double u);
double exponential_from_uniform(double u);

/// Mixes a base seed with a realization index into an independent seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Arrival times of a unit-rate Poisson process up to a horizon.
struct ArrivalSequence {
  std::vector<double> arrivals;  // Gamma_1 < ... <= horizon
  double next = 0.0;             // first arrival beyond the horizon
  std::size_t count() const { return arrivals.size(); }
};

ArrivalSequence poisson_arrivals(RandomStream& stream, double horizon);

/// Same construction from explicit exponential increments. The increments
/// must extend past the horizon.
ArrivalSequence arrivals_from_increments(std::span<const double> increments, double horizon);

/// One labeled substream per primitive sequence used by the generators.
/// Keeping them separate couples expansions built at different truncation
/// levels: term i always sees the i-th draw of each stream.
struct StreamBundle {
  explicit StreamBundle(std::uint64_t seed);

  std::uint64_t seed;
  RandomStream arrivals;   // Gamma_i
  RandomStream frequency;  // U_i' mapped through the frequency quantile
  RandomStream amplitude;  // R_i
  RandomStream phase;      // phi_i
  RandomStream shot;       // V_i
  RandomStream uniform;    // U_i for conditioned constructions
  RandomStream subordinator;
};

}  // namespace harmosyn
