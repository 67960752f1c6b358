#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "harmosyn/quadrature.hpp"

namespace harmosyn {

struct Atom {
  double location;
  double mass;
};

struct DensityPoint {
  double x;
  double density;
};

enum class MeasureKind { gamma, atoms, density_table, truncated, scaled };

/// Which closed form the gamma tail uses.
///   scaled_argument: Lambda[u,inf) = E1(u/nu)/nu, the jump measure of a gamma
///                    subordinator with scale nu and unit mean per unit time.
///   literal:         Lambda[u,inf) = E1(u)/nu. Coincides with the above at nu = 1.
enum class GammaTailForm { scaled_argument, literal };

struct GammaMeasureParams {
  double nu = 1.0;
  GammaTailForm form = GammaTailForm::scaled_argument;
};

/// A smooth density on [lo, hi] (hi may be +inf) plus point masses.
/// Every measure decomposes into this form; integrals against the measure
/// are computed piece by piece.
struct MeasureParts {
  struct Piece {
    double lo;
    double hi;
    std::function<double(double)> density;
  };
  std::vector<Piece> pieces;
  std::vector<Atom> atoms;
};

/// Levy measure on (0, inf) with finite second moment.
///
/// Values are immutable and cheap to copy (shared representation), so one
/// measure can be handed to any number of parallel realizations.
class LevyMeasure {
 public:
  static LevyMeasure gamma(GammaMeasureParams params);
  static LevyMeasure gamma(double nu) { return gamma(GammaMeasureParams{nu}); }
  /// Point masses; locations must be positive.
  static LevyMeasure atoms(std::vector<Atom> atoms);
  /// Piecewise-linear density through the given points, zero outside
  /// [front().x, back().x]. Requires front().x > 0.
  static LevyMeasure density_table(std::vector<DensityPoint> points);

  MeasureKind kind() const;

  /// Lambda[u, inf) for u > 0.
  double tail(double u) const;
  /// Generalized inverse inf{x > 0 : Lambda[x, inf) < g}; zero once g
  /// exceeds the total mass.
  double tail_inverse(double g) const;
  /// Lambda(0, inf); +inf for measures with infinite activity.
  double total_mass() const;
  /// Density of the absolutely continuous part, zero where there is none.
  double density(double x) const;

  /// The measure restricted to [tail_inverse(level), inf) with its mass
  /// clipped at `level`. Identity when level >= total_mass().
  LevyMeasure truncate(double level) const;
  /// factor * Lambda.
  LevyMeasure scale(double factor) const;

  /// Left end of the support of a truncated measure; 0 otherwise.
  double cutoff() const;
  /// Truncation level or scale factor for derived kinds; 0 otherwise.
  double level() const;
  /// Base of a truncated or scaled measure.
  const LevyMeasure& base() const;
  const GammaMeasureParams& gamma_params() const;
  const std::vector<Atom>& atom_list() const;
  const std::vector<DensityPoint>& density_points() const;

  MeasureParts parts() const;

  /// int phi dLambda over [lo, hi) (hi may be +inf), by quadrature on the
  /// density pieces and summation over atoms.
  double integrate(const std::function<double(double)>& phi, double lo = 0.0,
                   double hi = std::numeric_limits<double>::infinity(),
                   const QuadratureOptions& options = {}) const;

  /// int (e^{-s x} - 1) Lambda(dx) for s >= 0, by quadrature.
  double laplace_exponent(double s, const QuadratureOptions& options = {}) const;

  double mean() const;           // int x Lambda(dx)
  double second_moment() const;  // int x^2 Lambda(dx)

  std::string describe() const;

 private:
  struct Impl;
  explicit LevyMeasure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

double tail(const LevyMeasure& measure, double u);
double tail_inverse(const LevyMeasure& measure, double g);
LevyMeasure truncate(const LevyMeasure& measure, double level);

struct NormalizationReport {
  double second_moment = 0.0;
  double unit_tail_mean = 0.0;  // int_1^inf u Lambda(du)
  double mean = 0.0;            // int_0^inf u Lambda(du)
  bool unit_tail_condition = false;  // |unit_tail_mean - 1| <= 1e-6
  bool mean_condition = false;       // |mean - 1| <= 1e-6
};

/// Evaluates the moment integrals used for normalization. The unit-tail
/// condition is reported only; the unit-mean condition is what makes the
/// amplitude subordinator have E G(1) = 1.
NormalizationReport check_normalization(const LevyMeasure& measure);

/// Truncation level L such that arrivals beyond L carry at most
/// (1 - retained) of the first moment int x Lambda(dx). For finite-mass
/// measures whose whole mass is needed this is total_mass().
double retained_truncation_level(const LevyMeasure& measure, double retained = 1.0 - 1e-3);

/// Fraction of int x Lambda(dx) carried by arrivals up to `level`.
double retained_mean_fraction(const LevyMeasure& measure, double level);

/// Gamma jump measure for the process whose one-dimensional marginal has
/// characteristic function (1 + nu u^2)^{-f/nu}, f = sigma0^2/2.
LevyMeasure laplace_levy_measure(double nu, double sigma0);

}  // namespace harmosyn
