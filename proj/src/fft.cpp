#include "rstat/fft.hpp"

#include <cmath>

namespace rstat {

void fft_pow2(std::vector<Complex>& x, bool inverse) {
    const std::size_t n = x.size();
    if (n < 2) return;
    if ((n & (n - 1)) != 0) throw InvalidInputError("fft length must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * kPi / static_cast<double>(len);
        const Complex wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = x[i + k];
                const Complex v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (Complex& v : x) v *= inv;
    }
}

namespace {

// Shared core: bins of the forward DFT re-indexed to signed lags with the
// phase factor induced by the grid origin at -pi:
//   r_k = (1/M) sum_m s_m e^{-ik lambda_m} = (-1)^k / M * DFT(s)[k mod M].
std::vector<Complex> lags_from_dft(std::vector<Complex> work, std::uint32_t maxlag,
                                   bool onesided) {
    const std::size_t m = work.size();
    fft_pow2(work, false);
    const double norm = 1.0 / static_cast<double>(m);
    const int lo = onesided ? 0 : -static_cast<int>(maxlag);
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(static_cast<int>(maxlag) - lo + 1));
    for (int k = lo; k <= static_cast<int>(maxlag); ++k) {
        const std::size_t bin = static_cast<std::size_t>((k % static_cast<int>(m) + static_cast<int>(m)) % static_cast<int>(m));
        const double sgn = (k & 1) ? -1.0 : 1.0;
        out.push_back(work[bin] * (sgn * norm));
    }
    return out;
}

}  // namespace

std::vector<Complex> grid_fourier_coeffs(const Grid& grid, const std::vector<double>& samples,
                                         std::uint32_t maxlag) {
    if (samples.size() != grid.size())
        throw InvalidInputError("sample vector does not match grid size");
    if (2 * maxlag >= grid.size())
        throw InvalidInputError("requested lag exceeds grid resolution");
    std::vector<Complex> work(samples.begin(), samples.end());
    return lags_from_dft(std::move(work), maxlag, /*onesided=*/true);
}

std::vector<Complex> grid_fourier_coeffs_twosided(const Grid& grid,
                                                  const std::vector<Complex>& samples,
                                                  std::uint32_t maxlag) {
    if (samples.size() != grid.size())
        throw InvalidInputError("sample vector does not match grid size");
    if (2 * maxlag >= grid.size())
        throw InvalidInputError("requested lag exceeds grid resolution");
    return lags_from_dft(samples, maxlag, /*onesided=*/false);
}

std::vector<Complex> grid_eval_band(const Grid& grid, const std::vector<Complex>& coeffs,
                                    int min_index) {
    const std::size_t m = grid.size();
    if (coeffs.size() >= m)
        throw InvalidInputError("Fourier band is wider than the grid");
    // h(lambda_m) = sum_j c_j e^{ij lambda_m} = M * IDFT(g)[m] with
    // g[j mod M] = (-1)^j c_j.
    std::vector<Complex> work(m, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const int j = min_index + static_cast<int>(i);
        const std::size_t bin = static_cast<std::size_t>((j % static_cast<int>(m) + static_cast<int>(m)) % static_cast<int>(m));
        const double sgn = (j & 1) ? -1.0 : 1.0;
        work[bin] += coeffs[i] * sgn;
    }
    fft_pow2(work, true);
    for (Complex& v : work) v *= static_cast<double>(m);
    return work;
}

}  // namespace rstat
