#include "harmosyn/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "harmosyn/errors.hpp"

namespace harmosyn {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
using Gauss = boost::math::quadrature::gauss<double, 30>;

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// Kronrod nodes at even indices (including the centre), Gauss nodes at odd ones.
Panel evaluate_panel(const std::function<double(double)>& g, double a, double b) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = g(c);
  double kronrod = f0 * wk[0];
  double gauss = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double pair = g(c + h * x[i]) + g(c - h * x[i]);
    kronrod += pair * wk[i];
    if (i % 2 == 1) gauss += pair * wg[i / 2];
  }
  kronrod *= h;
  gauss *= h;
  const double err =
      std::max(std::abs(kronrod - gauss), 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  return {a, b, kronrod, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
  if (std::isnan(a) || std::isnan(b) || a > b) throw DomainError("integrate: invalid interval");
  if (a == b) return {};

  std::function<double(double)> g = f;
  double lo = a;
  double hi = b;
  if (std::isinf(b)) {
    if (std::isinf(a)) throw DomainError("integrate: lower limit must be finite");
    g = [&f, a](double t) {
      const double s = 1.0 - t;
      if (s <= 0.0) return 0.0;
      const double v = f(a + t / s);
      return v == 0.0 ? 0.0 : v / (s * s);
    };
    lo = 0.0;
    hi = 1.0;
  }

  std::priority_queue<Panel> queue;
  Panel first = evaluate_panel(g, lo, hi);
  double total = first.value;
  double total_err = first.error;
  queue.push(first);
  std::size_t panels = 1;

  auto converged = [&] {
    return total_err <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
  };
  while (!converged()) {
    if (panels >= options.max_panels) {
      std::ostringstream msg;
      msg << "integrate: no convergence on [" << a << ", " << b << "] after " << panels
          << " panels (estimate " << total << ", error " << total_err << ")";
      throw NumericalError(msg.str());
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval exhausted at machine resolution; accept what we have.
      queue.push(worst);
      break;
    }
    Panel left = evaluate_panel(g, worst.a, mid);
    Panel right = evaluate_panel(g, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  // Re-sum for accuracy; the running total accumulates cancellation error.
  double sum = 0.0;
  double err = 0.0;
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  if (!std::isfinite(sum)) throw NumericalError("integrate: non-finite integrand value");
  return {sum, err, panels};
}

QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     std::span<const double> breaks,
                                     const QuadratureOptions& options) {
  QuadratureResult out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (breaks[k + 1] <= breaks[k]) continue;
    const auto piece = integrate(f, breaks[k], breaks[k + 1], options);
    out.value += piece.value;
    out.error += piece.error;
    out.panels += piece.panels;
  }
  return out;
}

}  // namespace harmosyn
