#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "harmosyn/charfn.hpp"
#include "harmosyn/errors.hpp"
#include "harmosyn/statistics.hpp"
#include "harmosyn/synthesis.hpp"
#include "support.hpp"

using namespace harmosyn;
using doctest::Approx;

TEST_CASE("quadratic form") {
  const std::vector<double> u1{1.7};
  const std::vector<double> t1{3.0};
  for (double l : {0.0, 0.4, 2.0}) CHECK(quad_form(u1, t1, l) == Approx(1.7 * 1.7));
  CHECK(quad_form(std::vector<double>{1.0, -1.0}, std::vector<double>{0.0, 0.0}, 0.8) == Approx(0.0));
  CHECK(std::abs(quad_form(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, std::numbers::pi}, 1.0)) < 1e-15);
  // u A u^T with A_jk = cos(lambda (t_j - t_k)).
  const std::vector<double> u{0.3, -1.1, 0.6};
  const std::vector<double> t{0.0, 0.7, 2.5};
  const double l = 1.3;
  double direct = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) direct += u[j] * u[k] * std::cos(l * (t[j] - t[k]));
  CHECK(quad_form(u, t, l) == Approx(direct));
}

TEST_CASE("closed-form Laplace characteristic function") {
  CHECK(laplace_marginal_cf(0.0, 1.3, 0.7) == 1.0);
  CHECK(laplace_marginal_cf(1.0, 1.0, 1.0) == Approx(0.5));
  for (double u : {0.3, 1.0, 4.0}) CHECK(laplace_marginal_cf(u, 1.5, 1.5) == Approx(1.0 / (1.0 + 1.5 * u * u)));
}

TEST_CASE("fdd_cf basics") {
  const auto model = testing::laplace_model();
  CHECK(fdd_cf(std::vector<double>{0.0, 0.0}, std::vector<double>{0.0, 1.0}, model) == 1.0);
  for (double u : {0.2, 1.0, 3.0}) {
    CHECK(fdd_cf(std::vector<double>{u}, std::vector<double>{0.0}, model) ==
          Approx(laplace_marginal_cf(u, 1.5, 1.5)).epsilon(1e-6));
  }
  // Two copies of X(0).
  CHECK(fdd_cf(std::vector<double>{0.4, 0.9}, std::vector<double>{0.0, 0.0}, model) ==
        Approx(marginal_cf(1.3, model)).epsilon(1e-9));
  CHECK_THROWS_AS(fdd_cf(std::vector<double>{0.4}, std::vector<double>{0.0, 1.0}, model), DomainError);
}

TEST_CASE("fdd_cf matches the closed form on a 5x5 grid at times (0, 1)") {
  const auto model = testing::laplace_model();
  const std::vector<double> times{0.0, 1.0};
  double worst = 0.0;
  for (double u1 : {-2.0, -1.0, 0.0, 1.0, 2.0})
    for (double u2 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const std::vector<double> u{u1, u2};
      worst = std::max(worst, std::abs(fdd_cf(u, times, model) - laplace_fdd_cf(u, times, 1.5, model.spectrum)));
    }
  CHECK(worst <= 1e-6);
}

TEST_CASE("closed-form fdd reduces to the marginal and tends to the phase-averaged limit at large lags") {
  const SpectralDistribution spec(std::sqrt(3.0), FrequencyDistribution::uniform(0.0, 1.0));
  for (double u : {0.5, 2.0})
    CHECK(laplace_fdd_cf(std::vector<double>{u}, std::vector<double>{0.0}, 1.5, spec) ==
          Approx(laplace_marginal_cf(u, 1.5, 1.5)).epsilon(1e-10));
  // The amplitudes are shared by all times, so X(0) and X(t) stay dependent.
  // As t grows cos(lambda t) equidistributes and the exponent becomes the mean
  // of ln(A + B cos theta) over theta, which is ln((A + sqrt(A^2 - B^2)) / 2).
  for (auto [a, b] : {std::pair{0.5, 0.7}, std::pair{1.0, -0.4}}) {
    const double joint = laplace_fdd_cf(std::vector<double>{a, b}, std::vector<double>{0.0, 1000.0}, 1.5, spec);
    const double A = 1.0 + 1.5 * (a * a + b * b);
    const double B = 2.0 * 1.5 * a * b;
    const double limit = 2.0 / (A + std::sqrt(A * A - B * B));
    CHECK(joint == Approx(limit).epsilon(1e-3));
    const double product = laplace_marginal_cf(a, 1.5, 1.5) * laplace_marginal_cf(b, 1.5, 1.5);
    CHECK(std::abs(joint - product) > 0.01);
  }
}

TEST_CASE("characteristic functions are bounded, even and 1 at 0") {
  const auto model = testing::laplace_model();
  const HarmonizableModel atoms{LevyMeasure::atoms({{0.5, 1.0}, {2.0, 0.25}}),
                                SpectralDistribution(1.0, FrequencyDistribution::exponential(1.0))};
  for (const auto& m : {model, atoms}) {
    CHECK(marginal_cf(0.0, m) == 1.0);
    for (double u = 0.1; u < 6.0; u += 0.7) {
      const double v = marginal_cf(u, m);
      CHECK(std::abs(v) <= 1.0);
      CHECK(marginal_cf(-u, m) == Approx(v));
      const std::vector<double> times{0.0, 0.8};
      const double j = fdd_cf(std::vector<double>{u, 0.5 * u}, times, m);
      CHECK(std::abs(j) <= 1.0);
      CHECK(fdd_cf(std::vector<double>{-u, -0.5 * u}, times, m) == Approx(j));
    }
  }
}

TEST_CASE("atom measure marginal cf") {
  // Lambda = mass 1 at x=1: log cf = e^{-sigma0^2 u^2 / 2} - 1.
  const HarmonizableModel m{LevyMeasure::atoms({{1.0, 1.0}}),
                            SpectralDistribution(1.2, FrequencyDistribution::uniform(0.0, 2.0))};
  for (double u : {0.3, 1.0, 2.5}) {
    CHECK(marginal_cf(u, m) == Approx(std::exp(std::expm1(-0.72 * u * u))).epsilon(1e-12));
  }
}

TEST_CASE("value-derivative characteristic function") {
  const auto model = testing::laplace_model();
  CHECK(value_derivative_cf(0.0, 0.0, model) == 1.0);
  for (double u : {0.3, 1.2}) CHECK(value_derivative_cf(u, 0.0, model) == Approx(marginal_cf(u, model)).epsilon(1e-9));
  // Single frequency atom: X'(0) has the law of l1 X(0) up to sign.
  const HarmonizableModel atom{LevyMeasure::gamma(1.0),
                               SpectralDistribution(std::sqrt(3.0), FrequencyDistribution::atoms({{0.6, 1.0}}))};
  for (double u : {0.5, 2.0}) CHECK(value_derivative_cf(0.0, u, atom) == Approx(marginal_cf(0.6 * u, atom)).epsilon(1e-9));
  const HarmonizableModel heavy{
      LevyMeasure::gamma(1.0),
      SpectralDistribution(1.0, FrequencyDistribution::custom(
                                    "cauchy-like", [](double u) { return std::tan(0.5 * std::numbers::pi * u); },
                                    [](double l) { return 2.0 / std::numbers::pi * std::atan(l); },
                                    std::numeric_limits<double>::infinity()))};
  CHECK_THROWS_WITH_AS(value_derivative_cf(0.1, 0.1, heavy), doctest::Contains("second moment"), DomainError);
}

TEST_CASE("derivative variance from finite differences") {
  // -d^2/du2^2 cf at 0 = sigma0^2 E lambda^2 (mean-one measure) = 3 * 1/3.
  const auto model = testing::laplace_model();
  const double h = 1e-3;
  const double curvature = (value_derivative_cf(0.0, h, model) - 1.0) * 2.0 / (h * h);
  CHECK(-curvature == Approx(1.0).epsilon(1e-3));
  RunningMoments diff;
  const double dt = 0.01;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    const HarmonicExpansion e = generate_inverse_levy(model.measure, model.spectrum, 7.0, seed);
    const double d = (evaluate_at(e, dt) - evaluate_at(e, 0.0)) / dt;
    diff.add(d * d);
  }
  CHECK(std::abs(diff.mean() - 1.0) < 4.0 * diff.standard_error() + 0.01);
}

TEST_CASE("density of the Laplace model") {
  std::vector<double> x;
  for (int k = -400; k <= 400; ++k) x.push_back(0.05 * k);
  const DensityResult d = marginal_density(x, testing::laplace_cf);
  const double b = std::sqrt(1.5);
  for (std::size_t k = 0; k < x.size(); ++k) {
    CHECK(std::abs(d.density[k] - std::exp(-std::abs(x[k]) / b) / (2.0 * b)) < 5e-5);
    CHECK(d.density[k] == Approx(d.density[x.size() - 1 - k]).epsilon(1e-9));
  }
  // Composite Simpson; the kink at 0 sits on a panel boundary.
  double mass = 0.0;
  for (std::size_t k = 0; k + 2 < x.size(); k += 2)
    mass += 0.05 / 3.0 * (d.density[k] + 4.0 * d.density[k + 1] + d.density[k + 2]);
  CHECK(mass == Approx(1.0).epsilon(1e-4));
  CHECK(d.cutoff == 1e4);
  CHECK_FALSE(d.warnings.empty());
  CHECK(std::isfinite(d.density[x.size() / 2]));
}

TEST_CASE("density inversion through the model quadrature") {
  const std::vector<double> x{-2.0, -0.5, 0.0, 0.5, 2.0};
  const DensityResult d = marginal_density(x, testing::laplace_model(), {1e-12, 256.0});
  const double b = std::sqrt(1.5);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(d.density[k] - std::exp(-std::abs(x[k]) / b) / (2.0 * b)) < 2e-3);
}

TEST_CASE("fast-decaying cf truncates below the floor") {
  std::vector<double> x;
  for (double v = -8.0; v <= 8.0; v += 0.1) x.push_back(v);
  const DensityResult d = marginal_density(x, [](double u) { return std::exp(-0.5 * u * u); });
  CHECK(d.cutoff < 16.0);
  CHECK(d.warnings.empty());
  for (std::size_t k = 0; k < x.size(); ++k)
    CHECK(d.density[k] == Approx(std::exp(-0.5 * x[k] * x[k]) / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-8));
}

TEST_CASE("slowly decaying cf flags an unbounded density at 0") {
  // Gamma mixture with shape 1/4: cf (1 + u^2)^{-1/4} decays like u^{-1/2}.
  const std::vector<double> x{-1.0, 0.0, 1.0};
  const DensityResult d = marginal_density(x, [](double u) { return std::pow(1.0 + u * u, -0.25); });
  CHECK_FALSE(d.warnings.empty());
  CHECK(std::isnan(d.density[1]));
  CHECK(std::isfinite(d.density[0]));
}

TEST_CASE("cdf and quantiles of the Laplace model") {
  const double b = std::sqrt(1.5);
  const std::vector<double> x{-3.0, -1.0, 0.0, 0.4, 2.5};
  const auto cdf = marginal_cdf(x, testing::laplace_cf);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double exact = x[k] < 0 ? 0.5 * std::exp(x[k] / b) : 1.0 - 0.5 * std::exp(-x[k] / b);
    CHECK(cdf[k] == Approx(exact).epsilon(1e-5));
  }
  const std::vector<double> p{0.05, 0.5, 0.9};
  const auto q = marginal_quantiles(p, testing::laplace_cf, 50.0);
  CHECK(q[0] == Approx(b * std::log(0.1)).epsilon(1e-5));
  CHECK(std::abs(q[1]) < 1e-6);
  CHECK(q[2] == Approx(-b * std::log(0.2)).epsilon(1e-5));
}

TEST_CASE("autocovariance") {
  const SpectralDistribution uni(std::sqrt(3.0), FrequencyDistribution::uniform(0.0, 1.0));
  CHECK(autocovariance(0.0, uni) == Approx(3.0));
  for (double tau : {0.5, 1.0, 2.0, 7.5}) CHECK(autocovariance(tau, uni) == Approx(3.0 * std::sin(tau) / tau).epsilon(1e-9));
  const SpectralDistribution atom(2.0, FrequencyDistribution::atoms({{0.8, 1.0}}));
  for (double tau : {0.0, 1.0, 3.3}) CHECK(autocovariance(tau, atom) == Approx(4.0 * std::cos(0.8 * tau)));
}
