#include "harmosyn/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "harmosyn/errors.hpp"

namespace harmosyn {

double exp_integral_e1(double u) {
  if (!(u > 0.0)) throw DomainError("exp_integral_e1: argument must be positive");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (u <= 1.0) {
    // E1(u) = -gamma - ln u - sum_{k>=1} (-u)^k / (k k!)
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 100; ++k) {
      term *= -u / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < eps * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(u) - sum;
  }
  if (u > 740.0) return 0.0;
  // Modified Lentz evaluation of the continued fraction for e^u E1(u).
  constexpr double tiny = 1e-300;
  double b = u + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h * std::exp(-u);
  }
  throw NumericalError("exp_integral_e1: continued fraction did not converge");
}

double exp_integral_e1_inverse(double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError("exp_integral_e1_inverse: value must be positive and finite");
  // Work in z = ln y; h(z) = ln E1(e^z) - ln value is smooth and decreasing.
  const double target = std::log(value);
  auto h = [&](double z) { return std::log(exp_integral_e1(std::exp(z))) - target; };
  auto dh = [](double z) {
    const double y = std::exp(z);
    return -std::exp(-y) / exp_integral_e1(y);
  };

  double z;
  if (value > 0.5) {
    z = -std::numbers::egamma - value;  // E1(y) ~ -gamma - ln y for small y
  } else {
    const double l = -std::log(value);  // E1(y) ~ e^{-y}/y for large y
    z = std::log(std::max(l - std::log(std::max(l, 1.0)), 1e-3));
  }
  z = std::max(z, -700.0);

  double lo = z;
  double hi = z;
  while (h(lo) < 0.0) lo -= 1.0;
  while (h(hi) > 0.0) hi += 1.0;
  if (lo < -745.0) return 0.0;

  for (int iter = 0; iter < 200; ++iter) {
    const double hz = h(z);
    if (hz == 0.0) return std::exp(z);
    if (hz > 0.0) lo = z; else hi = z;
    double next = z - hz / dh(z);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-15 * std::max(1.0, std::abs(z)) || hi - lo < 1e-15) {
      return std::exp(next);
    }
    z = next;
  }
  throw NumericalError("exp_integral_e1_inverse: root search did not converge");
}

}  // namespace harmosyn
