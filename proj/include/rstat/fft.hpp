#ifndef RSTAT_FFT_HPP
#define RSTAT_FFT_HPP

#include <complex>
#include <vector>

#include "rstat/grid.hpp"

namespace rstat {

/// In-place radix-2 decimation-in-time FFT. Forward transform computes
/// X[k] = sum_m x[m] exp(-2*pi*i*k*m/M); inverse applies exp(+...) and the
/// 1/M normalisation. Length must be a power of two.
void fft_pow2(std::vector<Complex>& x, bool inverse);

/// Fourier coefficients of a sampled 2pi-periodic function under the 1/(2pi)
/// convention: r_k = (1/2pi) integral t(lambda) e^{-ik lambda} d lambda,
/// i.e. t(lambda) = sum_k r_k e^{ik lambda}. Returns r_k for k = 0..maxlag;
/// for real samples the negative lags follow by conjugation.
std::vector<Complex> grid_fourier_coeffs(const Grid& grid, const std::vector<double>& samples,
                                         std::uint32_t maxlag);

/// Full two-sided variant for complex sample vectors: index i holds r_{i-maxlag}.
std::vector<Complex> grid_fourier_coeffs_twosided(const Grid& grid,
                                                  const std::vector<Complex>& samples,
                                                  std::uint32_t maxlag);

/// Evaluate a Fourier band sum_{j} c[j - min_index] e^{ij lambda_m} on all grid
/// points. The band width must stay below the grid size (no aliasing).
std::vector<Complex> grid_eval_band(const Grid& grid, const std::vector<Complex>& coeffs,
                                    int min_index);

/// Sequence of Fourier coefficients of a real-valued function, stored one-sided
/// so that r_{-k} = conj(r_k) holds exactly by construction.
class HermitianSequence {
public:
    HermitianSequence() = default;
    explicit HermitianSequence(std::vector<Complex> nonneg) : c_(std::move(nonneg)) {}

    std::uint32_t maxlag() const noexcept {
        return c_.empty() ? 0 : static_cast<std::uint32_t>(c_.size() - 1);
    }

    Complex at(int k) const {
        const std::size_t i = static_cast<std::size_t>(k < 0 ? -k : k);
        if (i >= c_.size()) return Complex(0.0, 0.0);
        return k < 0 ? std::conj(c_[i]) : c_[i];
    }

    const std::vector<Complex>& nonnegative() const noexcept { return c_; }

private:
    std::vector<Complex> c_;
};

}  // namespace rstat

#endif
