#pragma once

#include "harmosyn/levy_measure.hpp"
#include "harmosyn/spectrum.hpp"

namespace harmosyn {

/// The pair that determines the process up to its law: the jump measure of
/// the amplitude subordinator (marginal law) and the spectral distribution.
struct HarmonizableModel {
  LevyMeasure measure;
  SpectralDistribution spectrum;
};

}  // namespace harmosyn
