// Independent oracles used by the test suites. Everything here recomputes
// expected values through routes the library does not share: naive DFT sums,
// closed-form 2x2 eigen solutions, direct quadrature of error spectra.

#ifndef RSTAT_TESTS_ORACLES_HPP
#define RSTAT_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "rstat/coeffs.hpp"
#include "rstat/plan.hpp"
#include "rstat/rng.hpp"
#include "rstat/spectra.hpp"

namespace oracle {

using rstat::Complex;
inline constexpr double kPi = 3.14159265358979323846;

/// Naive O(M*K) Fourier coefficient sum, no FFT involved.
inline Complex naive_fourier_coeff(const std::vector<double>& samples, int k) {
    const std::size_t m = samples.size();
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double lambda = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
        acc += samples[i] * Complex(std::cos(k * lambda), -std::sin(k * lambda));
    }
    return acc / static_cast<double>(m);
}

/// Largest eigenvalue and eigenvector of a real symmetric 2x2 matrix by the
/// characteristic polynomial.
struct Eigen2 {
    double value;
    double v0, v1;
};
inline Eigen2 sym2x2_top(double a, double b, double d) {
    const double tr = a + d;
    const double det = a * d - b * b;
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    const double lam = tr / 2.0 + disc;
    double v0 = b, v1 = lam - a;
    if (std::abs(b) < 1e-300) {
        v0 = a >= d ? 1.0 : 0.0;
        v1 = a >= d ? 0.0 : 1.0;
    }
    const double n = std::sqrt(v0 * v0 + v1 * v1);
    v0 /= n;
    v1 /= n;
    if (v0 < 0) {
        v0 = -v0;
        v1 = -v1;
    }
    return {lam, v0, v1};
}

/// Direct-sum evaluation of a characteristic band at one frequency.
inline Complex eval_band_at(const std::vector<Complex>& h, int min_index, double lambda) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const int j = min_index + static_cast<int>(i);
        acc += h[i] * Complex(std::cos(j * lambda), std::sin(j * lambda));
    }
    return acc;
}

/// Quadrature of (1/2pi) int |A - h|^2 f (+ |h|^2 g) on a fresh uniform grid,
/// written without any library transform helpers.
inline double mse_direct(const rstat::CoefSeq& a, const rstat::EstimatePlan& plan,
                         const rstat::SpectralDensity& f, const rstat::SpectralDensity* g,
                         std::size_t m = 4096) {
    const rstat::Grid grid(static_cast<std::uint32_t>(m));
    const std::vector<double> fs = f.eval(grid);
    std::vector<double> gs;
    if (g) gs = g->eval(grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double lambda = -kPi + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
        Complex asym(0.0, 0.0);
        for (std::uint32_t j = 0; j < a.size(); ++j)
            asym += a.at(j) * Complex(std::cos(j * lambda), std::sin(j * lambda));
        const Complex hsym = eval_band_at(plan.h, plan.min_index, lambda);
        acc += std::norm(asym - hsym) * fs[i];
        if (g) acc += std::norm(hsym) * gs[i];
    }
    return acc / static_cast<double>(m);
}

/// Random rational density with conjugate-paired roots of modulus >= min_mod,
/// real coefficients and a positive overall scale.
inline rstat::SpectralDensity random_rational(rstat::Rng& rng, int max_order, double min_mod) {
    const auto random_poly = [&](int order) {
        std::vector<Complex> poly{Complex(1.0, 0.0)};
        int k = 0;
        while (k < order) {
            const double mod = min_mod + 1.5 * rng.uniform();
            if (k + 2 <= order && rng.uniform() < 0.7) {
                const double ang = kPi * rng.uniform();
                const Complex root = mod * Complex(std::cos(ang), std::sin(ang));
                // multiply by (1 - z/root)(1 - z/conj(root))
                const double c1 = -2.0 * std::cos(ang) / mod;
                const double c2 = 1.0 / (mod * mod);
                std::vector<Complex> next(poly.size() + 2, Complex(0.0, 0.0));
                for (std::size_t i = 0; i < poly.size(); ++i) {
                    next[i] += poly[i];
                    next[i + 1] += poly[i] * c1;
                    next[i + 2] += poly[i] * c2;
                }
                poly = std::move(next);
                k += 2;
            } else {
                const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                const double c1 = -sign / mod;
                std::vector<Complex> next(poly.size() + 1, Complex(0.0, 0.0));
                for (std::size_t i = 0; i < poly.size(); ++i) {
                    next[i] += poly[i];
                    next[i + 1] += poly[i] * c1;
                }
                poly = std::move(next);
                k += 1;
            }
        }
        return poly;
    };
    const int ma_order = static_cast<int>(rng.uniform() * (max_order + 1));
    const int ar_order = static_cast<int>(rng.uniform() * (max_order + 1));
    std::vector<Complex> ma = random_poly(ma_order);
    std::vector<Complex> ar = random_poly(ar_order);
    const double scale = 0.25 + 4.0 * rng.uniform();
    for (Complex& c : ma) c *= std::sqrt(scale);
    return rstat::SpectralDensity::rational(std::move(ma), std::move(ar));
}

/// Random real functional with a handful of coefficients.
inline rstat::CoefSeq random_functional(rstat::Rng& rng, int max_len) {
    const int len = 1 + static_cast<int>(rng.uniform() * max_len);
    std::vector<Complex> c(static_cast<std::size_t>(len));
    for (auto& v : c) v = Complex(rng.symmetric(), 0.0);
    if (std::abs(c[0]) < 0.1) c[0] = Complex(1.0, 0.0);
    return rstat::CoefSeq::finite(std::move(c));
}

}  // namespace oracle

#endif
