#pragma once

#include <cmath>

#include "harmosyn/model.hpp"

namespace harmosyn::testing {

// Figure-scale model: Laplace marginal with characteristic function
// 1/(1 + 1.5 u^2), uniform frequencies on [0, 1].
inline HarmonizableModel laplace_model() {
  return {LevyMeasure::gamma(1.0), SpectralDistribution(std::sqrt(3.0), FrequencyDistribution::uniform(0.0, 1.0))};
}

inline double laplace_cf(double u) { return 1.0 / (1.0 + 1.5 * u * u); }

}  // namespace harmosyn::testing
