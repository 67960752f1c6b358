#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace harmosyn {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  std::size_t max_panels = 10000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod-minus-Gauss estimate summed over panels
  std::size_t panels = 0;
};

/// Globally adaptive 61-point Gauss-Kronrod integration of f over [a, b].
/// `b` may be +infinity (mapped via x = a + t/(1-t)). Panels are bisected in
/// order of largest error estimate until the total estimate satisfies
/// max(abs_tol, rel_tol*|I|) or the panel budget runs out, in which case a
/// NumericalError reports the last estimate.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Sum of integrals over consecutive intervals [breaks[k], breaks[k+1]].
QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     std::span<const double> breaks,
                                     const QuadratureOptions& options = {});

}  // namespace harmosyn
