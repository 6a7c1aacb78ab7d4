#ifndef RSTAT_INTERPOLATION_HPP
#define RSTAT_INTERPOLATION_HPP

#include "rstat/plan.hpp"

namespace rstat {

/// Interpolation of the functional sum_{j=0..N} a(j) xi(j) from observations
/// at all times outside {0..N}: c solves the Toeplitz system B_N c = a built
/// from the Fourier coefficients of 1/f, delta = <c, a> and
/// h = A_N(e^{i lambda}) - C_N(e^{i lambda}) / f(lambda).
EstimatePlan interpolate(const SpectralDensity& f, const CoefSeq& a, const Grid& grid,
                         std::uint32_t band_truncation = kDefaultTruncation);

/// Noisy variant: observations are xi(j) + eta(j) with noise density g; the
/// operators carry the symbols 1/(f+g), f/(f+g), f g/(f+g).
EstimatePlan interpolate_noisy(const SpectralDensity& f, const SpectralDensity& g,
                               const CoefSeq& a, const Grid& grid,
                               std::uint32_t band_truncation = kDefaultTruncation);

}  // namespace rstat

#endif
