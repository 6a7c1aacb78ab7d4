#include "rstat/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rstat {

namespace {

// Horner evaluation of sum_k c_k z^k at z = e^{-i lambda}.
Complex poly_at(const std::vector<Complex>& c, double lambda) {
    const Complex z(std::cos(lambda), -std::sin(lambda));
    Complex acc(0.0, 0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

}  // namespace

SpectralDensity SpectralDensity::rational(std::vector<Complex> ma, std::vector<Complex> ar) {
    if (ma.empty()) throw InvalidInputError("rational density needs at least one MA coefficient");
    if (ar.empty()) ar.push_back(Complex(1.0, 0.0));
    if (std::abs(ar.front() - Complex(1.0, 0.0)) > 1e-12)
        throw InvalidInputError("AR polynomial must have leading coefficient 1");
    SpectralDensity d;
    d.kind_ = Kind::rational;
    d.ma_ = std::move(ma);
    d.ar_ = std::move(ar);
    // No AR zeros on the unit circle: probe on a fine grid.
    const Grid probe(4096);
    double qmin = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (const Complex& c : d.ar_) scale = std::max(scale, std::abs(c));
    for (std::uint32_t m = 0; m < probe.size(); ++m)
        qmin = std::min(qmin, std::abs(poly_at(d.ar_, probe.point(m))));
    if (qmin <= 1e-8 * std::max(1.0, scale))
        throw InvalidInputError("degenerate density: AR polynomial vanishes on the unit circle");
    return d;
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> values) {
    if (values.empty()) throw InvalidInputError("grid density needs values");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidInputError("grid density values must be finite and nonnegative");
    SpectralDensity d;
    d.kind_ = Kind::grid;
    d.values_ = std::move(values);
    return d;
}

SpectralDensity SpectralDensity::constant(double c) {
    if (!(c >= 0.0)) throw InvalidInputError("constant density must be nonnegative");
    return rational({Complex(std::sqrt(c), 0.0)}, {Complex(1.0, 0.0)});
}

SpectralDensity SpectralDensity::from_samples(const Grid& grid, std::vector<double> values) {
    if (values.size() != grid.size())
        throw InvalidInputError("sample vector does not match grid size");
    return tabulated(std::move(values));
}

std::vector<double> SpectralDensity::eval(const Grid& grid) const {
    const std::uint32_t m = grid.size();
    std::vector<double> out(m);
    if (kind_ == Kind::rational) {
        for (std::uint32_t i = 0; i < m; ++i) {
            const double lambda = grid.point(i);
            const double num = std::norm(poly_at(ma_, lambda));
            const double den = std::norm(poly_at(ar_, lambda));
            if (den <= 1e-300)
                throw InvalidInputError("degenerate density: AR polynomial vanishes on the unit circle");
            out[i] = num / den;
        }
        return out;
    }
    if (values_.size() == m) return values_;
    // Trigonometric resampling between grid sizes; both are powers of two so
    // the shared low band transfers exactly.
    const std::uint32_t src = static_cast<std::uint32_t>(values_.size());
    if ((src & (src - 1)) != 0 || src < 64)
        throw InvalidInputError("grid density length must be a power of two >= 64");
    const Grid sgrid(src);
    const std::uint32_t keep = std::min(m, src) / 2 - 1;
    const std::vector<Complex> r = grid_fourier_coeffs(sgrid, values_, keep);
    std::vector<Complex> band(2 * keep + 1);
    for (std::uint32_t k = 0; k <= keep; ++k) {
        band[keep + k] = r[k];
        band[keep - k] = std::conj(r[k]);
    }
    const std::vector<Complex> vals = grid_eval_band(grid, band, -static_cast<int>(keep));
    for (std::uint32_t i = 0; i < m; ++i) out[i] = std::max(0.0, vals[i].real());
    return out;
}

ClampedSamples clamp_density_floor(const std::vector<double>& samples) {
    ClampedSamples out;
    double mx = 0.0;
    for (double v : samples) mx = std::max(mx, v);
    out.floor = kDensityFloorRel * mx;
    out.values = samples;
    if (mx == 0.0) {
        out.clamped_fraction = 1.0;
        return out;
    }
    std::size_t clamped = 0;
    for (double& v : out.values) {
        if (v < out.floor) {
            v = out.floor;
            ++clamped;
        }
    }
    out.clamped_fraction = static_cast<double>(clamped) / static_cast<double>(samples.size());
    return out;
}

HermitianSequence fourier_coeffs(const Grid& grid, const std::vector<double>& samples,
                                 SampleTransform transform, std::uint32_t maxlag) {
    std::vector<double> t(samples.size());
    switch (transform) {
        case SampleTransform::of_f:
            t = samples;
            break;
        case SampleTransform::of_inv_f:
            for (std::size_t i = 0; i < samples.size(); ++i) {
                if (!(samples[i] > 0.0))
                    throw NumericError("minimality violated: nonpositive sample under inverse transform");
                t[i] = 1.0 / samples[i];
            }
            break;
        case SampleTransform::of_log_f:
            for (std::size_t i = 0; i < samples.size(); ++i) {
                if (!(samples[i] > 0.0))
                    throw NumericError("minimality violated: nonpositive sample under log transform");
                t[i] = std::log(samples[i]);
            }
            break;
    }
    return HermitianSequence(grid_fourier_coeffs(grid, t, maxlag));
}

SzegoReport check_szego(const SpectralDensity& density, const Grid& grid) {
    SzegoReport rep;
    const ClampedSamples cs = clamp_density_floor(density.eval(grid));
    rep.clamped_fraction = cs.clamped_fraction;
    if (cs.clamped_fraction >= 1.0) {
        rep.regular = false;
        rep.geometric_mean = 0.0;
        return rep;
    }
    double log_mean = 0.0;
    double abs_log = 0.0;
    for (double v : cs.values) {
        const double l = std::log(v);
        log_mean += l;
        abs_log += std::abs(l);
    }
    log_mean /= static_cast<double>(grid.size());
    abs_log /= static_cast<double>(grid.size());
    rep.geometric_mean = std::exp(log_mean);
    rep.regular = std::isfinite(abs_log) && cs.clamped_fraction <= kClampedFractionLimit;
    return rep;
}

std::vector<Complex> Factorization::eval_phi(const Grid& grid) const {
    // phi(lambda) = sum_k d(k) e^{-ik lambda}: a band on indices -L..0.
    std::vector<Complex> band(d.rbegin(), d.rend());
    return grid_eval_band(grid, band, -static_cast<int>(d.size() - 1));
}

double Factorization::one_step_error(std::uint32_t j) const {
    if (j >= d.size())
        throw NumericError("one-step error index exceeds factorization truncation");
    double acc = 0.0;
    for (std::uint32_t u = 0; u <= j; ++u) acc += std::norm(d[u]);
    return acc;
}

Factorization factorize_samples(const Grid& grid, const std::vector<double>& samples,
                                std::uint32_t truncation, bool enforce_residual) {
    if (truncation == 0) throw InvalidInputError("factorization truncation must be positive");
    if (2 * truncation >= grid.size())
        throw InvalidInputError("factorization truncation must stay below half the grid size");

    const ClampedSamples cs = clamp_density_floor(samples);
    if (cs.clamped_fraction > kClampedFractionLimit)
        throw NumericError("density is not regular: log integral diverges on the grid");

    const HermitianSequence kappa =
        fourier_coeffs(grid, cs.values, SampleTransform::of_log_f, truncation);

    // Power-series exponential: with psi(z) = kappa_0/2 + sum_{k>=1} kappa_k z^k,
    // D(z) = exp(psi(z)) satisfies n d_n = sum_{k=1..n} k psi_k d_{n-k}.
    const std::size_t len = truncation + 1;
    std::vector<Complex> psi(len, Complex(0.0, 0.0));
    psi[0] = kappa.at(0) * 0.5;
    for (std::size_t k = 1; k < len; ++k) psi[k] = kappa.at(static_cast<int>(k));

    Factorization fact;
    fact.clamped_fraction = cs.clamped_fraction;
    fact.d.assign(len, Complex(0.0, 0.0));
    fact.d[0] = std::exp(psi[0]);
    for (std::size_t n = 1; n < len; ++n) {
        Complex acc(0.0, 0.0);
        for (std::size_t k = 1; k <= n; ++k)
            acc += static_cast<double>(k) * psi[k] * fact.d[n - k];
        fact.d[n] = acc / static_cast<double>(n);
    }
    fact.geometric_mean = std::exp(kappa.at(0).real());

    // Reconstruction residual against the (unclamped) input samples.
    const std::vector<Complex> phi = fact.eval_phi(grid);
    double mx = 0.0, worst = 0.0;
    for (double v : samples) mx = std::max(mx, v);
    for (std::uint32_t m = 0; m < grid.size(); ++m)
        worst = std::max(worst, std::abs(samples[m] - std::norm(phi[m])));
    fact.residual = mx > 0.0 ? worst / mx : worst;
    if (enforce_residual && fact.residual > kFactorizationResidualLimit)
        throw NumericError("factorization did not converge: relative residual " +
                           std::to_string(fact.residual));
    return fact;
}

Factorization factorize(const SpectralDensity& density, const Grid& grid,
                        std::uint32_t truncation) {
    const SzegoReport rep = check_szego(density, grid);
    if (!rep.regular)
        throw NumericError("density is not regular: canonical factorization does not exist");
    return factorize_samples(grid, density.eval(grid), truncation);
}

}  // namespace rstat
