#ifndef RSTAT_SPECTRA_HPP
#define RSTAT_SPECTRA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rstat/fft.hpp"
#include "rstat/grid.hpp"

namespace rstat {

/// A nonnegative 2pi-periodic spectral density, either rational
///   f(lambda) = |P(e^{-i lambda})|^2 / |Q(e^{-i lambda})|^2
/// with P the moving-average polynomial and Q the autoregressive polynomial
/// (leading coefficient 1), or tabulated on the uniform grid
/// lambda_m = -pi + 2 pi m / M.
class SpectralDensity {
public:
    enum class Kind { rational, grid };

    static SpectralDensity rational(std::vector<Complex> ma, std::vector<Complex> ar);
    static SpectralDensity tabulated(std::vector<double> values);
    /// Constant density f == c.
    static SpectralDensity constant(double c);

    Kind kind() const noexcept { return kind_; }
    const std::vector<Complex>& ma_coeffs() const noexcept { return ma_; }
    const std::vector<Complex>& ar_coeffs() const noexcept { return ar_; }
    const std::vector<double>& grid_values() const noexcept { return values_; }

    /// Samples f(lambda_m) on the grid. Grid-kind densities are resampled by
    /// trigonometric interpolation when the requested size differs.
    std::vector<double> eval(const Grid& grid) const;

    /// Pointwise algebra used by the minimax solvers; results are grid-kind.
    static SpectralDensity from_samples(const Grid& grid, std::vector<double> values);

private:
    SpectralDensity() = default;
    Kind kind_ = Kind::grid;
    std::vector<Complex> ma_, ar_;
    std::vector<double> values_;
};

/// Result of clamping samples at the relative floor used before log/inverse
/// transforms. A density is treated as degenerate when too many samples sit
/// at the floor.
struct ClampedSamples {
    std::vector<double> values;
    double floor = 0.0;
    double clamped_fraction = 0.0;
};

inline constexpr double kDensityFloorRel = 1e-12;
inline constexpr double kClampedFractionLimit = 1e-3;

ClampedSamples clamp_density_floor(const std::vector<double>& samples);

/// Transform applied before taking Fourier coefficients.
enum class SampleTransform { of_f, of_inv_f, of_log_f };

/// r_k = (1/2pi) * integral t(lambda) e^{-ik lambda} d lambda for k=0..maxlag,
/// where t is f, 1/f or ln f. The inverse and log transforms require strictly
/// positive samples.
HermitianSequence fourier_coeffs(const Grid& grid, const std::vector<double>& samples,
                                 SampleTransform transform, std::uint32_t maxlag);

struct SzegoReport {
    bool regular = false;
    double geometric_mean = 0.0;    // exp((1/2pi) int ln f)
    double clamped_fraction = 0.0;
};

/// Regularity test: the density must stay above the clamping floor on all but
/// a negligible fraction of the grid and have integrable log.
SzegoReport check_szego(const SpectralDensity& density, const Grid& grid);

/// One-sided moving-average coefficients of the outer factor:
/// phi(lambda) = sum_k d(k) e^{-ik lambda} with |phi|^2 = f and d(0) > 0.
struct Factorization {
    std::vector<Complex> d;
    double geometric_mean = 0.0;   // equals d(0)^2 up to roundoff
    double residual = 0.0;         // max_m |f - |phi|^2| / max f on the grid
    double clamped_fraction = 0.0;

    std::uint32_t truncation() const noexcept {
        return d.empty() ? 0 : static_cast<std::uint32_t>(d.size() - 1);
    }

    /// phi evaluated on the grid.
    std::vector<Complex> eval_phi(const Grid& grid) const;

    /// Cumulative innovation energy sum_{u=0..j} |d(u)|^2: the mean-square
    /// error of the optimal j-step-ahead estimate of a single value.
    double one_step_error(std::uint32_t j) const;
};

inline constexpr double kFactorizationResidualLimit = 1e-6;

/// Canonical factorization via the cepstral (exponential) construction:
/// take kappa_k, the Fourier coefficients of ln f, form
/// psi(z) = kappa_0/2 + sum_{k>=1} kappa_k z^k and read d off exp(psi).
Factorization factorize(const SpectralDensity& density, const Grid& grid,
                        std::uint32_t truncation);

/// Same construction applied directly to positive samples; used when the
/// density only exists as grid values inside an iteration.
Factorization factorize_samples(const Grid& grid, const std::vector<double>& samples,
                                std::uint32_t truncation, bool enforce_residual = true);

}  // namespace rstat

#endif
