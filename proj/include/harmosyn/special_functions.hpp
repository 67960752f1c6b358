#pragma once

namespace harmosyn {

/// Exponential integral E1(u) = int_u^inf e^{-x}/x dx for u > 0.
/// Power series on (0, 1], continued fraction beyond; relative accuracy ~1e-15.
double exp_integral_e1(double u);

/// Solves E1(y) = value for y > 0. E1 is strictly decreasing, so the
/// solution is unique for every value > 0.
double exp_integral_e1_inverse(double value);

}  // namespace harmosyn
