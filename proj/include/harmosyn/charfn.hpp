#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "harmosyn/model.hpp"
#include "harmosyn/quadrature.hpp"

namespace harmosyn {

struct CfQuery {
  std::vector<double> u;
  std::vector<double> times;
  HarmonizableModel model;
};

/// (sum_j u_j cos(lambda t_j))^2 + (sum_j u_j sin(lambda t_j))^2 = u A u^T
/// with A_jk = cos(lambda (t_j - t_k)).
double quad_form(std::span<const double> u, std::span<const double> times, double lambda);

/// Characteristic function of (X(t_1), ..., X(t_n)) at u:
///   exp( E_lambda int (e^{-sigma0^2 x q(lambda)/2} - 1) Lambda(dx) ),  q = u A u^T,
/// with E_lambda over the frequency law (quantile substitution) and the
/// inner integral by quadrature over the measure. No small-jump
/// compensator: the series is an uncompensated sum of positive jumps.
double fdd_cf(const CfQuery& query, const QuadratureOptions& options = {});
double fdd_cf(std::span<const double> u, std::span<const double> times, const HarmonizableModel& model,
              const QuadratureOptions& options = {});

/// One-dimensional marginal characteristic function (n = 1 case of fdd_cf).
double marginal_cf(double u, const HarmonizableModel& model, const QuadratureOptions& options = {});

/// (1 + nu u^2)^{-f_total/nu}.
double laplace_marginal_cf(double u, double nu, double f_total);

/// exp( -(1/nu) int ln(1 + nu u A u^T) dF(lambda) ), F of total mass sigma0^2/2.
/// Reduces to laplace_marginal_cf for n = 1.
double laplace_fdd_cf(std::span<const double> u, std::span<const double> times, double nu,
                      const SpectralDistribution& spec, const QuadratureOptions& options = {});

/// Characteristic function of (X(0), X'(0)); uses q(lambda) = u1^2 + u2^2 lambda^2.
/// Throws DomainError when the frequency law has no finite second moment.
double value_derivative_cf(double u1, double u2, const HarmonizableModel& model,
                           const QuadratureOptions& options = {});

struct DensityOptions {
  double cf_floor = 1e-12;   // truncate the inversion integral once |cf| drops below
  double max_cutoff = 1e4;   // ... or at this frequency, whichever comes first
};

struct DensityResult {
  std::vector<double> x;
  std::vector<double> density;  // NaN where the inversion integral diverges
  double cutoff = 0.0;          // upper limit of the inversion integral
  double truncation_error = 0.0;  // estimate of the neglected tail at x = 0
  std::vector<std::string> warnings;
};

/// f(x) = (1/pi) int_0^U cf(u) cos(u x) du for a real, even characteristic function.
DensityResult marginal_density(std::span<const double> x_grid, const std::function<double(double)>& cf,
                               const DensityOptions& options = {});
DensityResult marginal_density(std::span<const double> x_grid, const HarmonizableModel& model,
                               const DensityOptions& options = {});

/// Gil-Pelaez: F(x) = 1/2 + (1/pi) int_0^U cf(u) sin(u x) / u du.
std::vector<double> marginal_cdf(std::span<const double> x_grid, const std::function<double(double)>& cf,
                                 const DensityOptions& options = {});

/// Quantiles of the marginal by bisection of the inverted cdf on [-x_range, x_range].
std::vector<double> marginal_quantiles(std::span<const double> probabilities, const std::function<double(double)>& cf,
                                       double x_range, const DensityOptions& options = {});

/// r(tau) = sigma0^2 E cos(lambda tau).
double autocovariance(double tau, const SpectralDistribution& spec, const QuadratureOptions& options = {});

}  // namespace harmosyn
