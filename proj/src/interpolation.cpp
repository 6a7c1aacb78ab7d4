#include "rstat/interpolation.hpp"

#include <cmath>

#include "rstat/errors.hpp"
#include "rstat/extrapolation.hpp"
#include "rstat/operators.hpp"

namespace rstat {

namespace {

constexpr double kDeltaImagTol = 1e-10;

CVector functional_vector(const CoefSeq& a) {
    if (!a.is_finite())
        throw InvalidInputError("interpolation requires a finite functional");
    CVector av(static_cast<Eigen::Index>(a.size()));
    for (std::uint32_t j = 0; j < a.size(); ++j) av(static_cast<Eigen::Index>(j)) = a.at(j);
    return av;
}

double real_checked(const Complex& delta) {
    if (std::abs(delta.imag()) > kDeltaImagTol * std::max(1.0, std::abs(delta.real())))
        throw NumericError("interpolation error has non-vanishing imaginary part " +
                           std::to_string(delta.imag()));
    return delta.real();
}

}  // namespace

EstimatePlan interpolate(const SpectralDensity& f, const CoefSeq& a, const Grid& grid,
                         std::uint32_t band_truncation) {
    const CVector av = functional_vector(a);
    const Eigen::Index order = av.size();
    const int upper = static_cast<int>(order) - 1;

    const std::vector<double> raw = f.eval(grid);
    const ClampedSamples cs = clamp_density_floor(raw);
    if (cs.clamped_fraction > kClampedFractionLimit)
        throw NumericError("minimality violated: 1/f is not integrable on the grid");

    const HermitianSequence rinv = fourier_coeffs(grid, cs.values, SampleTransform::of_inv_f,
                                                  static_cast<std::uint32_t>(order - 1));
    const HermitianMatrix bn = build_toeplitz(rinv, order);
    const CVector c = solve_hpd(bn, av);
    const double delta = real_checked(av.adjoint() * c);  // <c, a>

    const std::vector<Complex> asym = a.eval_symbol(grid);
    std::vector<Complex> cvec(c.data(), c.data() + c.size());
    const std::vector<Complex> csym = grid_eval_band(grid, cvec, 0);
    std::vector<Complex> h(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m)
        h[m] = asym[m] - csym[m] / cs.values[m];

    const std::uint32_t band = std::min<std::uint32_t>(
        grid.size() / 2 - 1, band_truncation + static_cast<std::uint32_t>(order));
    return plan_from_samples(ProblemTag::interpolation, upper, grid, h, band, delta);
}

EstimatePlan interpolate_noisy(const SpectralDensity& f, const SpectralDensity& g,
                               const CoefSeq& a, const Grid& grid,
                               std::uint32_t band_truncation) {
    const CVector av = functional_vector(a);
    const Eigen::Index order = av.size();
    const int upper = static_cast<int>(order) - 1;

    const std::vector<double> fs = f.eval(grid);
    const std::vector<double> gs = g.eval(grid);
    const NoisySymbols sym = noisy_symbols(grid, fs, gs);

    const std::uint32_t maxlag = static_cast<std::uint32_t>(order - 1);
    const HermitianSequence rb(grid_fourier_coeffs(grid, sym.inv, maxlag));
    const HermitianSequence rr(grid_fourier_coeffs(grid, sym.ratio, maxlag));
    const HermitianSequence rq(grid_fourier_coeffs(grid, sym.cross, maxlag));

    const HermitianMatrix bn = build_toeplitz(rb, order);
    const HermitianMatrix rn = build_toeplitz(rr, order);
    const HermitianMatrix qn = build_toeplitz(rq, order);

    const CVector ra = rn.matrix() * av;
    const CVector c = solve_hpd(bn, ra);
    const Complex fit = c.adjoint() * ra;  // <R a, c>
    const Complex noise = av.adjoint() * (qn.matrix() * av);
    const double delta = real_checked(fit + noise);

    const std::vector<Complex> asym = a.eval_symbol(grid);
    std::vector<Complex> cvec(c.data(), c.data() + c.size());
    const std::vector<Complex> csym = grid_eval_band(grid, cvec, 0);
    std::vector<Complex> h(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m)
        h[m] = asym[m] * sym.ratio[m] - csym[m] * sym.inv[m];

    const std::uint32_t band = std::min<std::uint32_t>(
        grid.size() / 2 - 1, band_truncation + static_cast<std::uint32_t>(order));
    return plan_from_samples(ProblemTag::interpolation_noisy, upper, grid, h, band, delta);
}

}  // namespace rstat
