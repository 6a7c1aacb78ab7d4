#include <doctest.h>

#include "oracles.hpp"
#include "rstat/extrapolation.hpp"

using namespace rstat;

namespace {
const Grid grid(4096);
const auto white = SpectralDensity::constant(1.0);
const auto ar1 = SpectralDensity::rational({{1.0, 0.0}}, {{1.0, 0.0}, {-0.5, 0.0}});
const auto one = CoefSeq::finite({{1.0, 0.0}});
}

TEST_CASE("white noise is unpredictable") {
    const auto plan = predict(white, one, grid, 64);
    CHECK(plan.delta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plan.max_abs() < 1e-10);
    CHECK(plan.support_leakage < 1e-8);
}

TEST_CASE("AR(1) one-step predictor is rho * xi(-1)") {
    const auto plan = predict(ar1, one, grid, 64);
    CHECK(plan.delta == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(plan.at(-1).real() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::abs(plan.at(-2)) < 1e-10);
    CHECK(plan.problem == ProblemTag::extrapolation);
}

TEST_CASE("AR(1) two-term functional: delta = (1+rho)^2 + 1") {
    const auto a = CoefSeq::finite({{1.0, 0.0}, {1.0, 0.0}});
    const auto plan = predict(ar1, a, grid, 64);
    CHECK(plan.delta == doctest::Approx(3.25).epsilon(1e-10));
    CHECK(plan.at(-1).real() == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("noisy estimation: flat signal and noise") {
    const auto plan = predict_noisy(white, white, one, grid, 64);
    CHECK(plan.delta == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(plan.max_abs() < 1e-9);

    const auto g3 = SpectralDensity::constant(3.0);
    const auto plan3 = predict_noisy(white, g3, one, grid, 64);
    CHECK(plan3.delta == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("noisy estimation degenerates to the noiseless one as g -> 0") {
    const auto zero = SpectralDensity::constant(0.0);
    const auto plan = predict_noisy(ar1, zero, one, grid, 128);
    CHECK(plan.delta == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("matrix delta equals the quadrature of the error spectrum") {
    Rng rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        const auto f = oracle::random_rational(rng, 3, 1.3);
        const auto a = oracle::random_functional(rng, 5);
        const auto plan = predict(f, a, grid, 256);
        const double direct = oracle::mse_direct(a, plan, f, nullptr);
        CHECK(plan.delta == doctest::Approx(direct).epsilon(1e-7));

        const auto g = oracle::random_rational(rng, 2, 1.4);
        const auto noisy = predict_noisy(f, g, a, grid, 160);
        const double directn = oracle::mse_direct(a, noisy, f, &g);
        CHECK(noisy.delta == doctest::Approx(directn).epsilon(1e-7));
    }
}

TEST_CASE("characteristic support stays on the negative axis") {
    Rng rng(37);
    for (int trial = 0; trial < 8; ++trial) {
        const auto f = oracle::random_rational(rng, 3, 1.3);
        const auto a = oracle::random_functional(rng, 5);
        const auto plan = predict(f, a, grid, 256);
        CHECK(plan.support_leakage <= 1e-8);
        CHECK(plan.max_index() <= -1);
    }
}

TEST_CASE("scaling the functional scales delta quadratically and h linearly") {
    const auto a1 = CoefSeq::finite({{1.0, 0.0}, {0.5, 0.0}});
    const auto a3 = CoefSeq::finite({{3.0, 0.0}, {1.5, 0.0}});
    const auto p1 = predict(ar1, a1, grid, 64);
    const auto p3 = predict(ar1, a3, grid, 64);
    CHECK(p3.delta == doctest::Approx(9.0 * p1.delta).epsilon(1e-12));
    CHECK(p3.at(-1).real() == doctest::Approx(3.0 * p1.at(-1).real()).epsilon(1e-12));
}

TEST_CASE("prediction refuses non-regular densities") {
    std::vector<double> vals(4096, 1.0);
    for (int i = 0; i < 400; ++i) vals[i] = 0.0;
    const auto bad = SpectralDensity::tabulated(vals);
    CHECK_THROWS_AS(predict(bad, one, grid, 64), NumericError);
}

TEST_CASE("noisy prediction enforces the minimality condition") {
    std::vector<double> f(4096, 0.0), g(4096, 0.0);
    // f + g vanishes on a subinterval
    for (int i = 500; i < 4096; ++i) f[static_cast<std::size_t>(i)] = 1.0;
    const auto fd = SpectralDensity::tabulated(f);
    const auto gd = SpectralDensity::tabulated(g);
    CHECK_THROWS_AS(predict_noisy(fd, gd, one, grid, 64), NumericError);
}

TEST_CASE("geometric functional prediction against a long finite truncation") {
    const auto geo = CoefSeq::geometric(Complex(1.0, 0.0), Complex(0.5, 0.0), 120);
    const auto plan = predict(ar1, geo, grid, 256);
    // reference: same functional written out explicitly
    std::vector<Complex> coeffs(120);
    for (int j = 0; j < 120; ++j) coeffs[static_cast<std::size_t>(j)] = std::pow(0.5, j);
    const auto ref = predict(ar1, CoefSeq::finite(coeffs), grid, 256);
    CHECK(plan.delta == doctest::Approx(ref.delta).epsilon(1e-12));
}
