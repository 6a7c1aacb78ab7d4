#ifndef RSTAT_EXTRAPOLATION_HPP
#define RSTAT_EXTRAPOLATION_HPP

#include "rstat/plan.hpp"

namespace rstat {

/// (Ad)_k = sum_l a(k+l) d(l) for k = 0..len-1.
std::vector<Complex> apply_functional(const CoefSeq& a, const std::vector<Complex>& d,
                                      std::size_t len);

/// Wiener-Kolmogorov extrapolation of the functional sum_j a(j) xi(j) from the
/// past xi(-1), xi(-2), ...: delta = ||Ad||^2 and
/// h = A(e^{i lambda}) - r(e^{i lambda}) / phi(lambda).
EstimatePlan predict(const SpectralDensity& f, const CoefSeq& a, const Grid& grid,
                     std::uint32_t truncation);

/// Observations carry uncorrelated stationary noise with density g. Solves the
/// Wiener-Hopf system through the Toeplitz operators with symbols 1/(f+g),
/// f/(f+g) and f g/(f+g), truncated at the functional truncation; the
/// truncation is accepted only if doubling it moves delta by < 1e-6 relative.
EstimatePlan predict_noisy(const SpectralDensity& f, const SpectralDensity& g,
                           const CoefSeq& a, const Grid& grid, std::uint32_t truncation);

/// Shared helper for the noisy problems: symbols of the three operator kernels
/// with the minimality check on f+g.
struct NoisySymbols {
    std::vector<double> inv;   // 1/(f+g)
    std::vector<double> ratio; // f/(f+g)
    std::vector<double> cross; // f g/(f+g)
    std::vector<double> sum;   // clamped f+g
};
NoisySymbols noisy_symbols(const Grid& grid, const std::vector<double>& f_samples,
                           const std::vector<double>& g_samples);

}  // namespace rstat

#endif
