#include <doctest.h>

#include "oracles.hpp"
#include "rstat/spectra.hpp"

using namespace rstat;

namespace {
const Grid g4096(4096);
}

TEST_CASE("eval_density: white noise and direct polynomial values") {
    const auto white = SpectralDensity::rational({{1.0, 0.0}}, {{1.0, 0.0}});
    for (double v : white.eval(g4096)) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    // rational ma=[1, 0.5] at lambda=0 -> |1.5|^2
    const auto ma1 = SpectralDensity::rational({{1.0, 0.0}, {0.5, 0.0}}, {{1.0, 0.0}});
    const auto vals = ma1.eval(g4096);
    CHECK(vals[2048] == doctest::Approx(2.25).epsilon(1e-13));  // lambda_2048 = 0

    // rational ar=[1, -0.5] at lambda=0 -> 1/0.25
    const auto ar1 = SpectralDensity::rational({{1.0, 0.0}}, {{1.0, 0.0}, {-0.5, 0.0}});
    CHECK(ar1.eval(g4096)[2048] == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("eval_density: AR root on the unit circle is rejected") {
    CHECK_THROWS_AS(SpectralDensity::rational({{1.0, 0.0}}, {{1.0, 0.0}, {-1.0, 0.0}}),
                    InvalidInputError);
}

TEST_CASE("grid densities must be nonnegative") {
    CHECK_THROWS_AS(SpectralDensity::tabulated({1.0, -0.1, 2.0}), InvalidInputError);
}

TEST_CASE("fourier_coeffs against the analytic MA(1)/AR(1) expansions") {
    const auto ma1 = SpectralDensity::rational({{1.0, 0.0}, {0.5, 0.0}}, {{1.0, 0.0}});
    const auto r = fourier_coeffs(g4096, ma1.eval(g4096), SampleTransform::of_f, 4);
    CHECK(r.at(0).real() == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(r.at(1).real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(r.at(2)) < 1e-13);
    CHECK(r.at(-1) == std::conj(r.at(1)));  // exact by construction

    const auto ar1 = SpectralDensity::rational({{1.0, 0.0}}, {{1.0, 0.0}, {-0.5, 0.0}});
    const auto ri = fourier_coeffs(g4096, ar1.eval(g4096), SampleTransform::of_inv_f, 4);
    CHECK(ri.at(0).real() == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(ri.at(1).real() == doctest::Approx(-0.5).epsilon(1e-13));

    // constant density: r_0 = 1, others vanish
    const auto rw = fourier_coeffs(g4096, std::vector<double>(4096, 1.0),
                                   SampleTransform::of_f, 3);
    CHECK(rw.at(0).real() == doctest::Approx(1.0));
    CHECK(std::abs(rw.at(1)) < 1e-15);
}

TEST_CASE("fourier_coeffs agrees with the naive DFT oracle") {
    Rng rng(7);
    std::vector<double> samples(256);
    for (double& v : samples) v = 0.1 + rng.uniform();
    const Grid g(256);
    const auto r = fourier_coeffs(g, samples, SampleTransform::of_f, 10);
    for (int k = 0; k <= 10; ++k) {
        const Complex want = oracle::naive_fourier_coeff(samples, k);
        CHECK(std::abs(r.at(k) - want) < 1e-12);
    }
}

TEST_CASE("fourier_coeffs rejects nonpositive samples under log/inverse") {
    std::vector<double> samples(64, 1.0);
    samples[5] = 0.0;
    const Grid g(64);
    CHECK_THROWS_AS(fourier_coeffs(g, samples, SampleTransform::of_inv_f, 2), NumericError);
    CHECK_THROWS_AS(fourier_coeffs(g, samples, SampleTransform::of_log_f, 2), NumericError);
}

TEST_CASE("check_szego: constants and a vanishing subinterval") {
    const auto white = SpectralDensity::constant(1.0);
    auto rep = check_szego(white, g4096);
    CHECK(rep.regular);
    CHECK(rep.geometric_mean == doctest::Approx(1.0).epsilon(1e-12));

    rep = check_szego(SpectralDensity::constant(4.0), g4096);
    CHECK(rep.regular);
    CHECK(rep.geometric_mean == doctest::Approx(4.0).epsilon(1e-12));

    std::vector<double> vals(4096, 1.0);
    for (int i = 0; i < 200; ++i) vals[i] = 0.0;  // zero on a subinterval
    rep = check_szego(SpectralDensity::tabulated(vals), g4096);
    CHECK_FALSE(rep.regular);
}

TEST_CASE("factorize: MA(1), constant, AR(1) closed forms") {
    const auto ma1 = SpectralDensity::rational({{1.0, 0.0}, {0.5, 0.0}}, {{1.0, 0.0}});
    auto f = factorize(ma1, g4096, 64);
    CHECK(f.d[0].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.d[1].real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(f.d[2]) < 1e-12);
    CHECK(f.residual < 1e-12);

    const auto c9 = SpectralDensity::constant(9.0);
    f = factorize(c9, g4096, 16);
    CHECK(f.d[0].real() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(f.d[1]) < 1e-12);

    const auto ar1 = SpectralDensity::rational({{1.0, 0.0}}, {{1.0, 0.0}, {-0.5, 0.0}});
    f = factorize(ar1, g4096, 64);
    for (int k = 0; k < 8; ++k)
        CHECK(f.d[static_cast<std::size_t>(k)].real() ==
              doctest::Approx(std::pow(0.5, k)).epsilon(1e-12));
}

TEST_CASE("factorize requires a regular density") {
    std::vector<double> vals(4096, 1.0);
    for (int i = 0; i < 400; ++i) vals[i] = 0.0;
    CHECK_THROWS_AS(factorize(SpectralDensity::tabulated(vals), g4096, 64), NumericError);
}

TEST_CASE("factorization round-trip on randomized rational densities") {
    Rng rng(42);
    for (int trial = 0; trial < 12; ++trial) {
        const auto f = oracle::random_rational(rng, 4, 1.2);
        const auto fact = factorize(f, g4096, 512);
        CHECK(fact.residual <= 1e-6);
        // d(0)^2 equals the geometric mean
        CHECK(std::norm(fact.d[0]) ==
              doctest::Approx(fact.geometric_mean).epsilon(1e-8));
    }
}

TEST_CASE("grid refinement leaves Fourier coefficients fixed to 1e-10") {
    Rng rng(3);
    const auto f = oracle::random_rational(rng, 3, 1.3);
    const Grid g1(2048), g2(4096);
    const auto r1 = fourier_coeffs(g1, f.eval(g1), SampleTransform::of_f, 16);
    const auto r2 = fourier_coeffs(g2, f.eval(g2), SampleTransform::of_f, 16);
    for (int k = 0; k <= 16; ++k) CHECK(std::abs(r1.at(k) - r2.at(k)) < 1e-10);
}

TEST_CASE("one_step_error accumulates innovation energy") {
    Factorization f;
    f.d = {Complex(1.0, 0.0), Complex(0.5, 0.0)};
    CHECK(f.one_step_error(0) == doctest::Approx(1.0));
    CHECK(f.one_step_error(1) == doctest::Approx(1.25));
    CHECK_THROWS_AS(f.one_step_error(2), NumericError);

    Factorization c;
    c.d = {Complex(std::sqrt(7.0), 0.0)};
    CHECK(c.one_step_error(0) == doctest::Approx(7.0));
}

TEST_CASE("grid resampling of tabulated densities is trig-exact for low bands") {
    // a smooth density tabulated at 1024, evaluated at 4096
    const Grid gsrc(1024);
    std::vector<double> vals(1024);
    for (std::uint32_t m = 0; m < 1024; ++m)
        vals[m] = 2.0 + std::cos(gsrc.point(m)) + 0.3 * std::sin(2.0 * gsrc.point(m));
    const auto d = SpectralDensity::tabulated(vals);
    const auto out = d.eval(g4096);
    for (std::uint32_t m = 0; m < 4096; m += 17) {
        const double lambda = g4096.point(m);
        const double want = 2.0 + std::cos(lambda) + 0.3 * std::sin(2.0 * lambda);
        CHECK(out[m] == doctest::Approx(want).epsilon(1e-10));
    }
}
