#include "harmosyn/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <variant>

#include "harmosyn/errors.hpp"
#include "harmosyn/special_functions.hpp"

namespace harmosyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GammaRep {
  GammaMeasureParams params;
};

// Atoms sorted by ascending location; suffix[k] = sum_{j >= k} mass_j.
struct AtomRep {
  std::vector<Atom> atoms;
  std::vector<double> suffix;
};

// suffix[k] = int_{x_k}^{x_n} density.
struct TableRep {
  std::vector<DensityPoint> points;
  std::vector<double> suffix;
};

struct TruncatedRep {
  LevyMeasure base;
  double level;
  double cutoff;
};

struct ScaledRep {
  LevyMeasure base;
  double factor;
};

double bisect_tail(const std::function<double(double)>& tail_fn, double g, double lo, double hi) {
  // Invariant: tail(lo) >= g > tail(hi).
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tail_fn(mid) < g) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace

struct LevyMeasure::Impl {
  std::variant<GammaRep, AtomRep, TableRep, TruncatedRep, ScaledRep> rep;
};

LevyMeasure LevyMeasure::gamma(GammaMeasureParams params) {
  if (!(params.nu > 0.0) || !std::isfinite(params.nu))
    throw DomainError("gamma measure: nu must be positive");
  return LevyMeasure(std::make_shared<Impl>(Impl{GammaRep{params}}));
}

LevyMeasure LevyMeasure::atoms(std::vector<Atom> atoms) {
  for (const auto& a : atoms) {
    if (!(a.location > 0.0) || !std::isfinite(a.location))
      throw DomainError("atom measure: locations must be positive and finite");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass))
      throw DomainError("atom measure: masses must be positive and finite");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  // Merge coincident locations.
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().location == a.location) merged.back().mass += a.mass;
    else merged.push_back(a);
  }
  std::vector<double> suffix(merged.size() + 1, 0.0);
  for (std::size_t k = merged.size(); k-- > 0;) suffix[k] = suffix[k + 1] + merged[k].mass;
  return LevyMeasure(std::make_shared<Impl>(Impl{AtomRep{std::move(merged), std::move(suffix)}}));
}

LevyMeasure LevyMeasure::density_table(std::vector<DensityPoint> points) {
  if (points.size() < 2) throw DomainError("density table: need at least two points");
  if (!(points.front().x > 0.0)) throw DomainError("density table: support must start above 0");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(points[k].density >= 0.0) || !std::isfinite(points[k].density))
      throw DomainError("density table: densities must be finite and nonnegative");
    if (k > 0 && !(points[k].x > points[k - 1].x))
      throw DomainError("density table: abscissae must be strictly increasing");
  }
  std::vector<double> suffix(points.size(), 0.0);
  for (std::size_t k = points.size() - 1; k-- > 0;) {
    suffix[k] = suffix[k + 1] +
                0.5 * (points[k + 1].x - points[k].x) * (points[k].density + points[k + 1].density);
  }
  if (!(suffix[0] > 0.0)) throw DomainError("density table: total mass must be positive");
  return LevyMeasure(std::make_shared<Impl>(Impl{TableRep{std::move(points), std::move(suffix)}}));
}

MeasureKind LevyMeasure::kind() const {
  return std::visit(
      [](const auto& r) -> MeasureKind {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GammaRep>) return MeasureKind::gamma;
        else if constexpr (std::is_same_v<T, AtomRep>) return MeasureKind::atoms;
        else if constexpr (std::is_same_v<T, TableRep>) return MeasureKind::density_table;
        else if constexpr (std::is_same_v<T, TruncatedRep>) return MeasureKind::truncated;
        else return MeasureKind::scaled;
      },
      impl_->rep);
}

double LevyMeasure::tail(double u) const {
  if (!(u > 0.0)) throw DomainError("tail: argument must be positive");
  return std::visit(
      [u](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GammaRep>) {
          const double nu = r.params.nu;
          const double arg = r.params.form == GammaTailForm::scaled_argument ? u / nu : u;
          return exp_integral_e1(arg) / nu;
        } else if constexpr (std::is_same_v<T, AtomRep>) {
          const auto it = std::lower_bound(r.atoms.begin(), r.atoms.end(), u,
                                           [](const Atom& a, double v) { return a.location < v; });
          return r.suffix[static_cast<std::size_t>(it - r.atoms.begin())];
        } else if constexpr (std::is_same_v<T, TableRep>) {
          const auto& p = r.points;
          if (u <= p.front().x) return r.suffix.front();
          if (u >= p.back().x) return 0.0;
          const auto it = std::upper_bound(p.begin(), p.end(), u,
                                           [](double v, const DensityPoint& q) { return v < q.x; });
          const std::size_t k = static_cast<std::size_t>(it - p.begin()) - 1;
          const double w = (u - p[k].x) / (p[k + 1].x - p[k].x);
          const double du = p[k].density + w * (p[k + 1].density - p[k].density);
          return r.suffix[k + 1] + 0.5 * (p[k + 1].x - u) * (du + p[k + 1].density);
        } else if constexpr (std::is_same_v<T, TruncatedRep>) {
          return std::min(r.base.tail(u), r.level);
        } else {
          return r.factor * r.base.tail(u);
        }
      },
      impl_->rep);
}

double LevyMeasure::tail_inverse(double g) const {
  if (!(g > 0.0)) throw DomainError("tail_inverse: argument must be positive");
  return std::visit(
      [g, this](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GammaRep>) {
          const double nu = r.params.nu;
          const double y = exp_integral_e1_inverse(nu * g);
          return r.params.form == GammaTailForm::scaled_argument ? nu * y : y;
        } else if constexpr (std::is_same_v<T, AtomRep>) {
          // Largest k with suffix[k] >= g; the inverse is that atom's location.
          if (r.suffix.front() < g) return 0.0;
          std::size_t k = 0;
          while (k + 1 < r.atoms.size() && r.suffix[k + 1] >= g) ++k;
          return r.atoms[k].location;
        } else if constexpr (std::is_same_v<T, TableRep>) {
          const auto& p = r.points;
          if (r.suffix.front() < g) return 0.0;
          std::size_t k = 0;
          while (k + 1 < p.size() - 1 && r.suffix[k + 1] >= g) ++k;
          return bisect_tail([this](double x) { return tail(x); }, g, p[k].x, p[k + 1].x);
        } else if constexpr (std::is_same_v<T, TruncatedRep>) {
          return g > r.level ? 0.0 : r.base.tail_inverse(g);
        } else {
          return r.base.tail_inverse(g / r.factor);
        }
      },
      impl_->rep);
}

double LevyMeasure::total_mass() const {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GammaRep>) return kInf;
        else if constexpr (std::is_same_v<T, AtomRep>) return r.suffix.front();
        else if constexpr (std::is_same_v<T, TableRep>) return r.suffix.front();
        else if constexpr (std::is_same_v<T, TruncatedRep>) return std::min(r.base.total_mass(), r.level);
        else return r.factor * r.base.total_mass();
      },
      impl_->rep);
}

double LevyMeasure::density(double x) const {
  if (!(x > 0.0)) return 0.0;
  return std::visit(
      [x](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GammaRep>) {
          const double nu = r.params.nu;
          const double rate = r.params.form == GammaTailForm::scaled_argument ? 1.0 / nu : 1.0;
          return std::exp(-x * rate) / (nu * x);
        } else if constexpr (std::is_same_v<T, AtomRep>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, TableRep>) {
          const auto& p = r.points;
          if (x < p.front().x || x > p.back().x) return 0.0;
          const auto it = std::upper_bound(p.begin(), p.end(), x,
                                           [](double v, const DensityPoint& q) { return v < q.x; });
          const std::size_t k = std::min(static_cast<std::size_t>(it - p.begin()), p.size() - 1) - 1;
          const double w = (x - p[k].x) / (p[k + 1].x - p[k].x);
          return p[k].density + w * (p[k + 1].density - p[k].density);
        } else if constexpr (std::is_same_v<T, TruncatedRep>) {
          return x >= r.cutoff ? r.base.density(x) : 0.0;
        } else {
          return r.factor * r.base.density(x);
        }
      },
      impl_->rep);
}

LevyMeasure LevyMeasure::truncate(double level) const {
  if (!(level > 0.0)) throw DomainError("truncate: level must be positive");
  if (level >= total_mass()) return *this;
  const double cutoff = tail_inverse(level);
  return LevyMeasure(std::make_shared<Impl>(Impl{TruncatedRep{*this, level, cutoff}}));
}

LevyMeasure LevyMeasure::scale(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("scale: factor must be positive");
  return LevyMeasure(std::make_shared<Impl>(Impl{ScaledRep{*this, factor}}));
}

double LevyMeasure::cutoff() const {
  if (const auto* t = std::get_if<TruncatedRep>(&impl_->rep)) return t->cutoff;
  return 0.0;
}

double LevyMeasure::level() const {
  if (const auto* t = std::get_if<TruncatedRep>(&impl_->rep)) return t->level;
  if (const auto* s = std::get_if<ScaledRep>(&impl_->rep)) return s->factor;
  return 0.0;
}

const LevyMeasure& LevyMeasure::base() const {
  if (const auto* t = std::get_if<TruncatedRep>(&impl_->rep)) return t->base;
  if (const auto* s = std::get_if<ScaledRep>(&impl_->rep)) return s->base;
  throw DomainError("base: measure is not derived");
}

const GammaMeasureParams& LevyMeasure::gamma_params() const {
  if (const auto* g = std::get_if<GammaRep>(&impl_->rep)) return g->params;
  throw DomainError("gamma_params: measure is not a gamma measure");
}

const std::vector<Atom>& LevyMeasure::atom_list() const {
  if (const auto* a = std::get_if<AtomRep>(&impl_->rep)) return a->atoms;
  throw DomainError("atom_list: measure is not an atom list");
}

const std::vector<DensityPoint>& LevyMeasure::density_points() const {
  if (const auto* t = std::get_if<TableRep>(&impl_->rep)) return t->points;
  throw DomainError("density_points: measure is not a density table");
}

MeasureParts LevyMeasure::parts() const {
  return std::visit(
      [this](const auto& r) -> MeasureParts {
        using T = std::decay_t<decltype(r)>;
        MeasureParts out;
        if constexpr (std::is_same_v<T, GammaRep>) {
          auto self = *this;
          auto dens = [self](double x) { return self.density(x); };
          out.pieces.push_back({0.0, 1.0, dens});
          out.pieces.push_back({1.0, kInf, dens});
        } else if constexpr (std::is_same_v<T, AtomRep>) {
          out.atoms = r.atoms;
        } else if constexpr (std::is_same_v<T, TableRep>) {
          auto self = *this;
          for (std::size_t k = 0; k + 1 < r.points.size(); ++k) {
            out.pieces.push_back(
                {r.points[k].x, r.points[k + 1].x, [self](double x) { return self.density(x); }});
          }
        } else if constexpr (std::is_same_v<T, TruncatedRep>) {
          MeasureParts base = r.base.parts();
          for (auto& p : base.pieces) {
            if (p.hi <= r.cutoff) continue;
            p.lo = std::max(p.lo, r.cutoff);
            out.pieces.push_back(std::move(p));
          }
          for (const auto& a : base.atoms) {
            if (a.location >= r.cutoff) out.atoms.push_back(a);
          }
          // Clipping the tail at `level` removes mass from an atom sitting at the cutoff.
          const double excess = r.base.tail(r.cutoff) - r.level;
          if (excess > 0.0) {
            for (auto& a : out.atoms) {
              if (a.location == r.cutoff) a.mass = std::max(0.0, a.mass - excess);
            }
          }
        } else {
          out = r.base.parts();
          const double f = r.factor;
          for (auto& p : out.pieces) {
            p.density = [f, d = std::move(p.density)](double x) { return f * d(x); };
          }
          for (auto& a : out.atoms) a.mass *= f;
        }
        return out;
      },
      impl_->rep);
}

double LevyMeasure::integrate(const std::function<double(double)>& phi, double lo, double hi,
                              const QuadratureOptions& options) const {
  const MeasureParts p = parts();
  double sum = 0.0;
  for (const auto& a : p.atoms) {
    if (a.location >= lo && a.location < hi) sum += phi(a.location) * a.mass;
  }
  for (const auto& piece : p.pieces) {
    const double a = std::max(lo, piece.lo);
    const double b = std::min(hi, piece.hi);
    if (!(b > a)) continue;
    const auto& dens = piece.density;
    sum += harmosyn::integrate([&](double x) { return phi(x) * dens(x); }, a, b, options).value;
  }
  return sum;
}

double LevyMeasure::laplace_exponent(double s, const QuadratureOptions& options) const {
  if (!(s >= 0.0)) throw DomainError("laplace_exponent: argument must be nonnegative");
  if (s == 0.0) return 0.0;
  return integrate([s](double x) { return std::expm1(-s * x); }, 0.0, kInf, options);
}

double LevyMeasure::mean() const {
  return integrate([](double x) { return x; });
}

double LevyMeasure::second_moment() const {
  return integrate([](double x) { return x * x; });
}

std::string LevyMeasure::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GammaRep>) {
          os << "gamma(nu=" << r.params.nu
             << (r.params.form == GammaTailForm::literal ? ", literal" : "") << ")";
        } else if constexpr (std::is_same_v<T, AtomRep>) {
          os << "atoms(n=" << r.atoms.size() << ")";
        } else if constexpr (std::is_same_v<T, TableRep>) {
          os << "density_table(n=" << r.points.size() << ")";
        } else if constexpr (std::is_same_v<T, TruncatedRep>) {
          os << "truncated(" << r.base.describe() << ", L=" << r.level << ")";
        } else {
          os << "scaled(" << r.base.describe() << ", L=" << r.factor << ")";
        }
      },
      impl_->rep);
  return os.str();
}

double tail(const LevyMeasure& measure, double u) { return measure.tail(u); }
double tail_inverse(const LevyMeasure& measure, double g) { return measure.tail_inverse(g); }
LevyMeasure truncate(const LevyMeasure& measure, double level) { return measure.truncate(level); }

NormalizationReport check_normalization(const LevyMeasure& measure) {
  NormalizationReport r;
  r.second_moment = measure.second_moment();
  if (!std::isfinite(r.second_moment))
    throw NumericalError("check_normalization: second moment is not finite");
  r.mean = measure.mean();
  r.unit_tail_mean = measure.integrate([](double x) { return x; }, 1.0, kInf);
  r.unit_tail_condition = std::abs(r.unit_tail_mean - 1.0) <= 1e-6;
  r.mean_condition = std::abs(r.mean - 1.0) <= 1e-6;
  return r;
}

double retained_mean_fraction(const LevyMeasure& measure, double level) {
  if (!(level > 0.0)) throw DomainError("retained_mean_fraction: level must be positive");
  return measure.truncate(level).mean() / measure.mean();
}

double retained_truncation_level(const LevyMeasure& measure, double retained) {
  if (!(retained > 0.0 && retained <= 1.0))
    throw DomainError("retained_truncation_level: fraction must lie in (0, 1]");
  const double total = measure.total_mass();
  double hi = std::isfinite(total) ? total : 1.0;
  if (std::isfinite(total) && retained >= 1.0) return total;
  while (retained_mean_fraction(measure, hi) < retained) {
    if (std::isfinite(total) && hi >= total) return total;
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("retained_truncation_level: level diverges");
  }
  double lo = hi / 2.0;
  while (lo > 1e-12 && retained_mean_fraction(measure, lo) >= retained) lo /= 2.0;
  for (int i = 0; i < 60 && hi - lo > 1e-6 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (retained_mean_fraction(measure, mid) >= retained) hi = mid; else lo = mid;
  }
  return hi;
}

LevyMeasure laplace_levy_measure(double nu, double sigma0) {
  if (!(nu > 0.0) || !(sigma0 > 0.0)) throw DomainError("laplace_levy_measure: parameters must be positive");
  return LevyMeasure::gamma(2.0 * nu / (sigma0 * sigma0));
}

}  // namespace harmosyn
