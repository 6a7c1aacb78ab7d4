#include "rstat/extrapolation.hpp"

#include <cmath>

#include "rstat/errors.hpp"
#include "rstat/operators.hpp"

namespace rstat {

std::vector<Complex> apply_functional(const CoefSeq& a, const std::vector<Complex>& d,
                                      std::size_t len) {
    std::vector<Complex> out(len, Complex(0.0, 0.0));
    const std::size_t na = a.size();
    for (std::size_t k = 0; k < len; ++k) {
        Complex acc(0.0, 0.0);
        for (std::size_t l = 0; l < d.size() && k + l < na; ++l)
            acc += a.at(static_cast<std::uint32_t>(k + l)) * d[l];
        out[k] = acc;
    }
    return out;
}

namespace {

void check_tail_certificate(const CoefSeq& a) {
    if (a.is_finite()) return;
    const std::uint32_t needed = a.required_truncation(kTailCertificateRel);
    if (a.size() < needed)
        throw NumericError("functional tail certificate failed: truncation " +
                           std::to_string(a.size()) + " insufficient, need " +
                           std::to_string(needed));
}

}  // namespace

EstimatePlan predict(const SpectralDensity& f, const CoefSeq& a, const Grid& grid,
                     std::uint32_t truncation) {
    check_tail_certificate(a);
    if (a.size() >= grid.size() / 4)
        throw InvalidInputError("functional truncation exceeds grid resolution");

    const Factorization fact = factorize(f, grid, truncation);
    const std::size_t len = truncation + 1;
    const std::vector<Complex> ad = apply_functional(a, fact.d, len);

    double delta = 0.0;
    for (const Complex& v : ad) delta += std::norm(v);

    // h = A - conj(phi)/|phi|^2 * r on the grid, with the clamped floor
    // guarding |phi|^2.
    const std::vector<Complex> asym = a.eval_symbol(grid);
    const std::vector<Complex> phi = fact.eval_phi(grid);
    const std::vector<Complex> rsym = grid_eval_band(grid, ad, 0);

    double phimax = 0.0;
    for (const Complex& p : phi) phimax = std::max(phimax, std::norm(p));
    const double floor = kDensityFloorRel * phimax;

    std::vector<Complex> h(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m) {
        const double p2 = std::max(std::norm(phi[m]), floor);
        h[m] = asym[m] - std::conj(phi[m]) / p2 * rsym[m];
    }

    const std::uint32_t band =
        std::min<std::uint32_t>(grid.size() / 2 - 1,
                                truncation + static_cast<std::uint32_t>(a.size()));
    return plan_from_samples(ProblemTag::extrapolation, static_cast<int>(a.size()) - 1, grid, h,
                             band, delta);
}

NoisySymbols noisy_symbols(const Grid& grid, const std::vector<double>& f_samples,
                           const std::vector<double>& g_samples) {
    if (f_samples.size() != grid.size() || g_samples.size() != grid.size())
        throw InvalidInputError("sample vectors do not match grid size");
    std::vector<double> sum(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m) sum[m] = f_samples[m] + g_samples[m];
    const ClampedSamples cs = clamp_density_floor(sum);
    if (cs.clamped_fraction > kClampedFractionLimit)
        throw NumericError("minimality violated: 1/(f+g) is not integrable on the grid");
    NoisySymbols s;
    s.sum = cs.values;
    s.inv.resize(grid.size());
    s.ratio.resize(grid.size());
    s.cross.resize(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m) {
        s.inv[m] = 1.0 / s.sum[m];
        s.ratio[m] = f_samples[m] / s.sum[m];
        s.cross[m] = f_samples[m] * g_samples[m] / s.sum[m];
    }
    return s;
}

namespace {

struct NoisySolveResult {
    CVector c;
    double delta = 0.0;
};

NoisySolveResult solve_noisy_system(const Grid& grid, const NoisySymbols& sym,
                                    const CoefSeq& a, Eigen::Index order) {
    const std::uint32_t maxlag = static_cast<std::uint32_t>(order - 1);
    const HermitianSequence rb(grid_fourier_coeffs(grid, sym.inv, maxlag));
    const HermitianSequence rr(grid_fourier_coeffs(grid, sym.ratio, maxlag));
    const HermitianSequence rq(grid_fourier_coeffs(grid, sym.cross, maxlag));

    const HermitianMatrix b = build_toeplitz(rb, order);
    const HermitianMatrix r = build_toeplitz(rr, order);
    const HermitianMatrix q = build_toeplitz(rq, order);

    CVector av(order);
    for (Eigen::Index j = 0; j < order; ++j) av(j) = a.at(static_cast<std::uint32_t>(j));

    NoisySolveResult out;
    const CVector ra = r.matrix() * av;
    out.c = solve_hpd(b, ra);
    const Complex fit = ra.adjoint() * out.c;
    const Complex noise = av.adjoint() * (q.matrix() * av);
    out.delta = fit.real() + noise.real();
    return out;
}

}  // namespace

EstimatePlan predict_noisy(const SpectralDensity& f, const SpectralDensity& g,
                           const CoefSeq& a, const Grid& grid, std::uint32_t truncation) {
    check_tail_certificate(a);
    if (a.size() > truncation + 1)
        throw InvalidInputError("functional is longer than the operator truncation");
    if (4 * truncation >= grid.size())
        throw InvalidInputError("operator truncation exceeds grid resolution");

    const std::vector<double> fs = f.eval(grid);
    const std::vector<double> gs = g.eval(grid);
    const NoisySymbols sym = noisy_symbols(grid, fs, gs);

    const Eigen::Index order = static_cast<Eigen::Index>(truncation) + 1;
    const NoisySolveResult base = solve_noisy_system(grid, sym, a, order);
    const NoisySolveResult wide = solve_noisy_system(grid, sym, a, 2 * order);
    const double shift = std::abs(wide.delta - base.delta) /
                         std::max(std::abs(wide.delta), 1e-300);
    if (shift > 1e-6)
        throw NumericError("operator truncation has not converged: doubling moved delta by " +
                           std::to_string(shift));

    const std::vector<Complex> asym = a.eval_symbol(grid);
    std::vector<Complex> cs(base.c.data(), base.c.data() + base.c.size());
    const std::vector<Complex> csym = grid_eval_band(grid, cs, 0);
    std::vector<Complex> h(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m)
        h[m] = asym[m] * sym.ratio[m] - csym[m] * sym.inv[m];

    const std::uint32_t band = std::min<std::uint32_t>(grid.size() / 2 - 1, 2 * truncation);
    return plan_from_samples(ProblemTag::extrapolation_noisy, static_cast<int>(a.size()) - 1,
                             grid, h, band, base.delta);
}

}  // namespace rstat
