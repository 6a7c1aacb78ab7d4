#ifndef RSTAT_MINIMAX_HPP
#define RSTAT_MINIMAX_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rstat/extrapolation.hpp"
#include "rstat/interpolation.hpp"
#include "rstat/plan.hpp"

namespace rstat {

enum class ProblemKind { extrapolation, interpolation };

enum class DensityClassTag {
    D0,        // power bound (1/2pi) int f <= P
    DM,        // moment constraints (f itself for extrapolation, 1/f for interpolation)
    Dvu,       // pointwise band v <= f <= u with fixed power
    Deps,      // epsilon-contamination around a known density
    D1eps,     // L1 neighbourhood of a center density
    D2eps,     // L2 neighbourhood of a center density
    D0minus,   // inverse-power bound (1/2pi) int 1/f >= P
    DvuMinus,  // pointwise band with fixed inverse power
    pinned     // singleton {center}
};

const char* class_tag_name(DensityClassTag t);
DensityClassTag class_tag_from_name(const std::string& name);

/// Admissible-density class description. Which fields apply depends on the
/// tag: `power` is the power (or inverse-power) level, `moments` the moment
/// targets of D_M, `lower`/`upper` the band of the strip models, `center` the
/// known density of the contamination/neighbourhood models and of `pinned`.
struct DensityClass {
    DensityClassTag tag = DensityClassTag::D0;
    double power = 0.0;
    double eps = 0.0;
    std::vector<double> moments;
    /// Moment constraints of D_M apply to 1/f instead of f (the interpolation
    /// flavour of the class).
    bool inverse_moments = false;
    std::optional<SpectralDensity> lower;
    std::optional<SpectralDensity> upper;
    std::optional<SpectralDensity> center;

    static DensityClass power_bound(double p) {
        DensityClass c;
        c.tag = DensityClassTag::D0;
        c.power = p;
        return c;
    }
    static DensityClass singleton(SpectralDensity d) {
        DensityClass c;
        c.tag = DensityClassTag::pinned;
        c.center = std::move(d);
        return c;
    }
};

struct SaddleResiduals {
    double fixedpoint = 0.0;  // sup-norm residual of the defining density equation
    double constraint = 0.0;  // worst class-membership violation
    double saddle_lo = 0.0;   // min over h-probes of Delta(h;f0) - Delta(h0;f0)
    double saddle_hi = 0.0;   // min over density probes of Delta(h0;f0) - Delta(h0;f)
};

struct MinimaxSolution {
    SpectralDensity lf_density = SpectralDensity::constant(1.0);
    std::optional<SpectralDensity> lf_noise;
    EstimatePlan h0;
    double game_value = 0.0;
    SaddleResiduals residuals;
    int iterations = 0;
    std::vector<std::string> notes;
};

struct MinimaxConfig {
    std::uint32_t grid_size = kDefaultGridSize;
    std::uint32_t truncation = kDefaultTruncation;
    double damping = 0.5;
    double fp_tol = 1e-8;
    int max_iter = 500;
    double class_tol = 1e-8;
    int saddle_probes = 500;
    std::uint64_t seed = 1;
    /// Relative amplitude of the audit probes. The default keeps the audit a
    /// first-order stationarity check; the inverse-power classes curve away
    /// from the saddle at second order, so large amplitudes surface that
    /// curvature as (real) positive violations.
    double probe_amplitude = 1e-4;
    int threads = 1;
};

/// Worst-case extrapolation under the power class D0: the least favourable
/// density is the moving average built from the dominant solution of the
/// con-eigenvalue problem A d = alpha conj(d) over the Hankel matrix of the
/// functional, scaled to ||d||^2 = P0.
MinimaxSolution lf_extrap_D0(const CoefSeq& a, double p0, std::uint32_t order,
                             const MinimaxConfig& cfg = {});

/// Interpolation under the inverse-power class: closed-form autoregressive
/// least favourable density with inverse Fourier coefficients P a(k)/a(0)
/// (or the reversed variant when only the reversed sequence is strictly
/// positive definite).
MinimaxSolution lf_interp_D0minus(const CoefSeq& a, double p, const MinimaxConfig& cfg = {});

/// Generic single-density fixed-point solver for the remaining classes.
MinimaxSolution lf_fixed_point(const CoefSeq& a, const DensityClass& cls, ProblemKind problem,
                               const MinimaxConfig& cfg = {});

/// Alternating fixed point for signal/noise class pairs; either member may be
/// pinned to a known density.
MinimaxSolution lf_noisy_pair(const CoefSeq& a, const DensityClass& fcls,
                              const DensityClass& gcls, ProblemKind problem,
                              const MinimaxConfig& cfg = {});

struct SaddleReport {
    double saddle_lo = 0.0;
    double saddle_hi = 0.0;
    int probes = 0;
    int skipped = 0;               // probes the sampler could not land in the class
    int worst_density_probe = -1;
    int worst_characteristic_probe = -1;
};

/// Randomised saddle audit: density probes are drawn from the class(es) and
/// must not beat the least favourable density; characteristic probes respect
/// the admissible support and must not beat h0. Deterministic given the seed;
/// results accumulate in probe-index order.
SaddleReport verify_saddle(const MinimaxSolution& sol, const CoefSeq& a,
                           const DensityClass& fcls, const DensityClass* gcls, int n_probes,
                           std::uint64_t seed, double amplitude, const Grid& grid,
                           int threads = 1);

/// Worst class-membership violation of a density given as grid samples.
double class_membership_violation(const Grid& grid, const std::vector<double>& samples,
                                  const DensityClass& cls);

}  // namespace rstat

#endif
