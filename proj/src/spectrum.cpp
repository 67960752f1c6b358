#include "harmosyn/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

#include "harmosyn/errors.hpp"

namespace harmosyn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct UniformRep {
  double a, b;
};
struct ExponentialRep {
  double rate;
};
struct AtomRep {
  std::vector<FrequencyAtom> atoms;  // ascending locations
  std::vector<double> cumulative;    // cumulative[k] = sum_{j <= k} weight_j
};
struct TableRep {
  std::vector<QuantilePoint> points;
};
struct CustomRep {
  std::string name;
  std::function<double(double)> quantile;
  std::function<double(double)> cdf;
  double second_moment;
};

}  // namespace

struct FrequencyDistribution::Impl {
  std::variant<UniformRep, ExponentialRep, AtomRep, TableRep, CustomRep> rep;
};

FrequencyDistribution FrequencyDistribution::uniform(double a, double b) {
  if (!(a >= 0.0) || !(b > a) || !std::isfinite(b))
    throw DomainError("uniform frequency law: need 0 <= a < b < inf");
  return FrequencyDistribution(std::make_shared<Impl>(Impl{UniformRep{a, b}}));
}

FrequencyDistribution FrequencyDistribution::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("exponential frequency law: rate must be positive");
  return FrequencyDistribution(std::make_shared<Impl>(Impl{ExponentialRep{rate}}));
}

FrequencyDistribution FrequencyDistribution::atoms(std::vector<FrequencyAtom> atoms) {
  if (atoms.empty()) throw DomainError("frequency atoms: need at least one atom");
  std::sort(atoms.begin(), atoms.end(),
            [](const FrequencyAtom& x, const FrequencyAtom& y) { return x.location < y.location; });
  double sum = 0.0;
  std::vector<double> cumulative;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!(atoms[k].location >= 0.0) || !std::isfinite(atoms[k].location))
      throw DomainError("frequency atoms: locations must be finite and nonnegative");
    if (!(atoms[k].weight > 0.0)) throw DomainError("frequency atoms: weights must be positive");
    if (k > 0 && atoms[k].location == atoms[k - 1].location)
      throw DomainError("frequency atoms: locations must be distinct");
    sum += atoms[k].weight;
    cumulative.push_back(sum);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("frequency atoms: weights must sum to 1");
  cumulative.back() = 1.0;
  return FrequencyDistribution(std::make_shared<Impl>(Impl{AtomRep{std::move(atoms), std::move(cumulative)}}));
}

FrequencyDistribution FrequencyDistribution::table(std::vector<QuantilePoint> points) {
  if (points.size() < 2) throw DomainError("quantile table: need at least two points");
  if (points.front().u != 0.0 || points.back().u != 1.0)
    throw DomainError("quantile table: u must run from 0 to 1");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(points[k].lambda >= 0.0) || !std::isfinite(points[k].lambda))
      throw DomainError("quantile table: frequencies must be finite and nonnegative");
    if (k > 0 && !(points[k].u > points[k - 1].u))
      throw DomainError("quantile table: u must be strictly increasing");
    if (k > 0 && points[k].lambda < points[k - 1].lambda)
      throw DomainError("quantile table: quantile must be non-decreasing");
  }
  return FrequencyDistribution(std::make_shared<Impl>(Impl{TableRep{std::move(points)}}));
}

FrequencyDistribution FrequencyDistribution::custom(std::string name, std::function<double(double)> quantile,
                                                    std::function<double(double)> cdf, double second_moment) {
  if (!quantile || !cdf) throw DomainError("custom frequency law: quantile and cdf are required");
  return FrequencyDistribution(std::make_shared<Impl>(
      Impl{CustomRep{std::move(name), std::move(quantile), std::move(cdf), second_moment}}));
}

FrequencyKind FrequencyDistribution::kind() const {
  switch (impl_->rep.index()) {
    case 0: return FrequencyKind::uniform;
    case 1: return FrequencyKind::exponential;
    case 2: return FrequencyKind::atoms;
    case 3: return FrequencyKind::table;
    default: return FrequencyKind::custom;
  }
}

double FrequencyDistribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: u must lie in (0, 1)");
  return std::visit(
      [u](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, UniformRep>) {
          return r.a + u * (r.b - r.a);
        } else if constexpr (std::is_same_v<T, ExponentialRep>) {
          return -std::log1p(-u) / r.rate;
        } else if constexpr (std::is_same_v<T, AtomRep>) {
          // First atom whose cumulative weight reaches u.
          const auto it = std::lower_bound(r.cumulative.begin(), r.cumulative.end(), u);
          const auto k = std::min(static_cast<std::size_t>(it - r.cumulative.begin()), r.atoms.size() - 1);
          return r.atoms[k].location;
        } else if constexpr (std::is_same_v<T, TableRep>) {
          const auto& p = r.points;
          const auto it = std::upper_bound(p.begin(), p.end(), u,
                                           [](double v, const QuantilePoint& q) { return v < q.u; });
          const std::size_t k = static_cast<std::size_t>(it - p.begin()) - 1;
          const double w = (u - p[k].u) / (p[k + 1].u - p[k].u);
          return p[k].lambda + w * (p[k + 1].lambda - p[k].lambda);
        } else {
          return r.quantile(u);
        }
      },
      impl_->rep);
}

double FrequencyDistribution::cdf(double lambda) const {
  if (std::isnan(lambda)) throw DomainError("cdf: NaN argument");
  if (lambda < 0.0) return 0.0;
  return std::visit(
      [lambda](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, UniformRep>) {
          return std::clamp((lambda - r.a) / (r.b - r.a), 0.0, 1.0);
        } else if constexpr (std::is_same_v<T, ExponentialRep>) {
          return std::isinf(lambda) ? 1.0 : -std::expm1(-r.rate * lambda);
        } else if constexpr (std::is_same_v<T, AtomRep>) {
          double c = 0.0;
          for (const auto& a : r.atoms) {
            if (a.location <= lambda) c += a.weight;
          }
          return std::min(c, 1.0);
        } else if constexpr (std::is_same_v<T, TableRep>) {
          const auto& p = r.points;
          if (lambda < p.front().lambda) return 0.0;
          if (lambda >= p.back().lambda) return 1.0;
          // Largest u with quantile(u) <= lambda (right-continuous CDF).
          std::size_t k = 0;
          while (k + 1 < p.size() && p[k + 1].lambda <= lambda) ++k;
          const double dl = p[k + 1].lambda - p[k].lambda;
          if (dl <= 0.0) return p[k + 1].u;
          return p[k].u + (lambda - p[k].lambda) / dl * (p[k + 1].u - p[k].u);
        } else {
          return std::isinf(lambda) ? 1.0 : r.cdf(lambda);
        }
      },
      impl_->rep);
}

double FrequencyDistribution::support_max() const {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, UniformRep>) return r.b;
        else if constexpr (std::is_same_v<T, ExponentialRep>) return kInf;
        else if constexpr (std::is_same_v<T, AtomRep>) return r.atoms.back().location;
        else if constexpr (std::is_same_v<T, TableRep>) return r.points.back().lambda;
        else return kInf;
      },
      impl_->rep);
}

double FrequencyDistribution::second_moment() const {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, UniformRep>) {
          return (r.a * r.a + r.a * r.b + r.b * r.b) / 3.0;
        } else if constexpr (std::is_same_v<T, ExponentialRep>) {
          return 2.0 / (r.rate * r.rate);
        } else if constexpr (std::is_same_v<T, AtomRep>) {
          double s = 0.0;
          for (const auto& a : r.atoms) s += a.weight * a.location * a.location;
          return s;
        } else if constexpr (std::is_same_v<T, TableRep>) {
          // Exact for a piecewise-linear quantile.
          double s = 0.0;
          for (std::size_t k = 0; k + 1 < r.points.size(); ++k) {
            const double a = r.points[k].lambda;
            const double b = r.points[k + 1].lambda;
            s += (r.points[k + 1].u - r.points[k].u) * (a * a + a * b + b * b) / 3.0;
          }
          return s;
        } else {
          return r.second_moment;
        }
      },
      impl_->rep);
}

const std::vector<FrequencyAtom>& FrequencyDistribution::atom_list() const {
  if (const auto* a = std::get_if<AtomRep>(&impl_->rep)) return a->atoms;
  throw DomainError("atom_list: frequency law is not discrete");
}

double FrequencyDistribution::uniform_lower() const {
  if (const auto* u = std::get_if<UniformRep>(&impl_->rep)) return u->a;
  throw DomainError("uniform_lower: frequency law is not uniform");
}

double FrequencyDistribution::uniform_upper() const {
  if (const auto* u = std::get_if<UniformRep>(&impl_->rep)) return u->b;
  throw DomainError("uniform_upper: frequency law is not uniform");
}

double FrequencyDistribution::exponential_rate() const {
  if (const auto* e = std::get_if<ExponentialRep>(&impl_->rep)) return e->rate;
  throw DomainError("exponential_rate: frequency law is not exponential");
}

const std::vector<QuantilePoint>& FrequencyDistribution::quantile_points() const {
  if (const auto* t = std::get_if<TableRep>(&impl_->rep)) return t->points;
  throw DomainError("quantile_points: frequency law is not a table");
}

double FrequencyDistribution::expect(const std::function<double(double)>& phi,
                                     const QuadratureOptions& options) const {
  if (const auto* a = std::get_if<AtomRep>(&impl_->rep)) {
    double s = 0.0;
    for (const auto& atom : a->atoms) s += atom.weight * phi(atom.location);
    return s;
  }
  std::vector<double> breaks{0.0, 1.0};
  if (const auto* t = std::get_if<TableRep>(&impl_->rep)) {
    breaks.clear();
    for (const auto& p : t->points) breaks.push_back(p.u);
  }
  auto integrand = [&](double u) { return phi(quantile(u)); };
  return integrate_piecewise(integrand, breaks, options).value;
}

std::string FrequencyDistribution::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, UniformRep>) os << "uniform(" << r.a << ", " << r.b << ")";
        else if constexpr (std::is_same_v<T, ExponentialRep>) os << "exponential(rate=" << r.rate << ")";
        else if constexpr (std::is_same_v<T, AtomRep>) os << "atoms(n=" << r.atoms.size() << ")";
        else if constexpr (std::is_same_v<T, TableRep>) os << "table(n=" << r.points.size() << ")";
        else os << r.name;
      },
      impl_->rep);
  return os.str();
}

SpectralDistribution::SpectralDistribution(double s, FrequencyDistribution f) : sigma0(s), freq(std::move(f)) {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw DomainError("spectral distribution: sigma0 must be positive");
}

double quantile(const FrequencyDistribution& freq, double u) { return freq.quantile(u); }

double spectral_cdf(const SpectralDistribution& spec, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("spectral_cdf: lambda must be nonnegative");
  return spec.total_mass() * spec.freq.cdf(lambda);
}

}  // namespace harmosyn
