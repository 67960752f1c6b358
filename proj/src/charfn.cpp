#include "harmosyn/charfn.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "harmosyn/errors.hpp"

namespace harmosyn {
namespace {

void check_query(std::span<const double> u, std::span<const double> times) {
  if (u.empty() || u.size() != times.size())
    throw DomainError("characteristic function: u and times must have equal, nonzero length");
}

// E_lambda[ laplace_exponent(sigma0^2 q(lambda) / 2) ]
double log_cf(const std::function<double(double)>& q, const HarmonizableModel& model,
              const QuadratureOptions& options) {
  const double half_var = 0.5 * model.spectrum.sigma0 * model.spectrum.sigma0;
  return model.spectrum.freq.expect(
      [&](double lambda) { return model.measure.laplace_exponent(half_var * q(lambda), options); }, options);
}

}  // namespace

double quad_form(std::span<const double> u, std::span<const double> times, double lambda) {
  if (u.size() != times.size()) throw DomainError("quad_form: u and times must have equal length");
  double c = 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    c += u[j] * std::cos(lambda * times[j]);
    s += u[j] * std::sin(lambda * times[j]);
  }
  return c * c + s * s;
}

double fdd_cf(std::span<const double> u, std::span<const double> times, const HarmonizableModel& model,
              const QuadratureOptions& options) {
  check_query(u, times);
  if (std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; })) return 1.0;
  return std::exp(log_cf([&](double lambda) { return quad_form(u, times, lambda); }, model, options));
}

double fdd_cf(const CfQuery& query, const QuadratureOptions& options) {
  return fdd_cf(query.u, query.times, query.model, options);
}

double marginal_cf(double u, const HarmonizableModel& model, const QuadratureOptions& options) {
  if (u == 0.0) return 1.0;
  const double half_var = 0.5 * model.spectrum.sigma0 * model.spectrum.sigma0;
  // q = u^2 for every frequency, so the frequency average is trivial.
  return std::exp(model.measure.laplace_exponent(half_var * u * u, options));
}

double laplace_marginal_cf(double u, double nu, double f_total) {
  if (!(nu > 0.0) || !(f_total > 0.0)) throw DomainError("laplace_marginal_cf: nu and f_total must be positive");
  return std::pow(1.0 + nu * u * u, -f_total / nu);
}

double laplace_fdd_cf(std::span<const double> u, std::span<const double> times, double nu,
                      const SpectralDistribution& spec, const QuadratureOptions& options) {
  if (!(nu > 0.0)) throw DomainError("laplace_fdd_cf: nu must be positive");
  check_query(u, times);
  const double integral =
      spec.freq.expect([&](double lambda) { return std::log1p(nu * quad_form(u, times, lambda)); }, options);
  return std::exp(-spec.total_mass() / nu * integral);
}

double value_derivative_cf(double u1, double u2, const HarmonizableModel& model,
                           const QuadratureOptions& options) {
  const double m2 = model.spectrum.freq.second_moment();
  if (!std::isfinite(m2)) {
    throw DomainError(
        "value_derivative_cf: the frequency law has no finite second moment int lambda^2 dF, "
        "so X'(0) does not exist in mean square");
  }
  if (u1 == 0.0 && u2 == 0.0) return 1.0;
  return std::exp(log_cf([&](double lambda) { return u1 * u1 + u2 * u2 * lambda * lambda; }, model, options));
}

namespace {

// Gauss-Legendre nodes on [0, U] with cf folded into the weights, shared by
// the density and cdf inversions.
struct InversionNodes {
  std::vector<double> u;
  std::vector<double> w;
  double cutoff = 0.0;
  double truncation_error = 0.0;
  bool divergent_at_zero = false;
  std::vector<std::string> warnings;
};

InversionNodes inversion_nodes(const std::function<double(double)>& cf, double xmax, const DensityOptions& options) {
  InversionNodes out;
  // Cutoff: first power of two where |cf| falls below the floor, capped.
  double cutoff = 1.0;
  while (std::abs(cf(cutoff)) >= options.cf_floor && cutoff < options.max_cutoff) cutoff *= 2.0;
  cutoff = std::min(cutoff, options.max_cutoff);
  out.cutoff = cutoff;

  const double at_cut = std::abs(cf(cutoff));
  if (at_cut >= options.cf_floor) {
    const double half = std::abs(cf(0.5 * cutoff));
    const double decay = at_cut > 0.0 ? std::log2(half / at_cut) : std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    if (decay > 1.0) {
      out.truncation_error = at_cut * cutoff / ((decay - 1.0) * std::numbers::pi);
      msg << "characteristic function still " << at_cut << " at u=" << cutoff
          << "; estimated truncation error " << out.truncation_error;
    } else {
      out.divergent_at_zero = true;
      out.truncation_error = std::numeric_limits<double>::infinity();
      msg << "characteristic function decays like u^-" << decay
          << "; the density is unbounded at 0 and x=0 is excluded";
    }
    out.warnings.push_back(msg.str());
  }

  // 20 Gauss nodes resolve cos(u x) to near machine precision over a phase
  // span of 8 radians per panel.
  const double width = std::min(1.0, 8.0 / std::max(1.0, xmax));
  const auto panels = static_cast<std::size_t>(std::ceil(cutoff / width));
  const double h = cutoff / static_cast<double>(panels);

  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& nodes = Rule::abscissa();
  const auto& weights = Rule::weights();
  out.u.reserve(panels * 2 * nodes.size());
  out.w.reserve(panels * 2 * nodes.size());
  for (std::size_t p = 0; p < panels; ++p) {
    const double c = (static_cast<double>(p) + 0.5) * h;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        if (nodes[i] == 0.0 && sign > 0.0) continue;
        const double u = c + sign * 0.5 * h * nodes[i];
        out.u.push_back(u);
        out.w.push_back(0.5 * h * weights[i] * cf(u));
      }
    }
  }
  return out;
}

double max_abs(std::span<const double> xs) {
  double m = 1.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

double cdf_sum(const InversionNodes& nodes, double x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.u.size(); ++i) sum += nodes.w[i] * std::sin(nodes.u[i] * x) / nodes.u[i];
  return std::clamp(0.5 + sum / std::numbers::pi, 0.0, 1.0);
}

}  // namespace

DensityResult marginal_density(std::span<const double> x_grid, const std::function<double(double)>& cf,
                               const DensityOptions& options) {
  const InversionNodes nodes = inversion_nodes(cf, max_abs(x_grid), options);
  DensityResult out;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.density.assign(x_grid.size(), 0.0);
  out.cutoff = nodes.cutoff;
  out.truncation_error = nodes.truncation_error;
  out.warnings = nodes.warnings;
  for (std::size_t k = 0; k < x_grid.size(); ++k) {
    const double x = x_grid[k];
    if (nodes.divergent_at_zero && x == 0.0) {
      out.density[k] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.u.size(); ++i) sum += nodes.w[i] * std::cos(nodes.u[i] * x);
    out.density[k] = sum / std::numbers::pi;
  }
  return out;
}

std::vector<double> marginal_cdf(std::span<const double> x_grid, const std::function<double(double)>& cf,
                                 const DensityOptions& options) {
  const InversionNodes nodes = inversion_nodes(cf, max_abs(x_grid), options);
  std::vector<double> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) out.push_back(cdf_sum(nodes, x));
  return out;
}

std::vector<double> marginal_quantiles(std::span<const double> probabilities, const std::function<double(double)>& cf,
                                       double x_range, const DensityOptions& options) {
  if (!(x_range > 0.0)) throw DomainError("marginal_quantiles: x_range must be positive");
  const InversionNodes nodes = inversion_nodes(cf, x_range, options);
  std::vector<double> out;
  for (double p : probabilities) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("marginal_quantiles: probabilities must lie in (0,1)");
    double lo = -x_range;
    double hi = x_range;
    if (cdf_sum(nodes, lo) > p || cdf_sum(nodes, hi) < p)
      throw NumericalError("marginal_quantiles: quantile outside [-x_range, x_range]");
    for (int it = 0; it < 60 && hi - lo > 1e-10 * x_range; ++it) {
      const double mid = 0.5 * (lo + hi);
      (cdf_sum(nodes, mid) < p ? lo : hi) = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

DensityResult marginal_density(std::span<const double> x_grid, const HarmonizableModel& model,
                               const DensityOptions& options) {
  return marginal_density(x_grid, [&model](double u) { return marginal_cf(u, model); }, options);
}

double autocovariance(double tau, const SpectralDistribution& spec, const QuadratureOptions& options) {
  const double s2 = spec.sigma0 * spec.sigma0;
  if (tau == 0.0) return s2;
  return s2 * spec.freq.expect([tau](double lambda) { return std::cos(lambda * tau); }, options);
}

}  // namespace harmosyn
