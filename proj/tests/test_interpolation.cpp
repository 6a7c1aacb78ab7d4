#include <doctest.h>

#include "oracles.hpp"
#include "rstat/interpolation.hpp"

using namespace rstat;

namespace {
const Grid grid(4096);
const auto white = SpectralDensity::constant(1.0);
const auto ar1 = SpectralDensity::rational({{1.0, 0.0}}, {{1.0, 0.0}, {-0.5, 0.0}});
const auto one = CoefSeq::finite({{1.0, 0.0}});
}

TEST_CASE("white noise interpolation: h vanishes, delta = |a|^2") {
    const auto a = CoefSeq::finite({{2.0, 0.0}, {3.0, 0.0}});
    const auto plan = interpolate(white, a, grid);
    CHECK(plan.delta == doctest::Approx(13.0).epsilon(1e-12));
    CHECK(plan.max_abs() < 1e-10);
    CHECK(plan.problem == ProblemTag::interpolation);
    CHECK(plan.missing_upper == 1);
}

TEST_CASE("AR(1) single missing value: delta = 1/r0 = 0.8") {
    const auto plan = interpolate(ar1, one, grid);
    CHECK(plan.delta == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("two-point example matches the closed-form error for real symbols") {
    // alpha, beta from 1/f of the AR(1) density: alpha=1.25, beta=-0.5
    const Complex a0(0.7, 0.0), b0(1.3, 0.0);
    const auto a = CoefSeq::finite({a0, b0});
    const auto plan = interpolate(ar1, a, grid);
    const double alpha = 1.25, beta = -0.5;
    const double num =
        (std::norm(a0) + std::norm(b0)) * alpha -
        ((std::conj(a0) * b0 + a0 * std::conj(b0)).real()) * beta;
    CHECK(plan.delta == doctest::Approx(num / (alpha * alpha - beta * beta)).epsilon(1e-10));
}

TEST_CASE("noisy interpolation: flat signal/noise pairs") {
    const auto plan = interpolate_noisy(white, white, one, grid);
    CHECK(plan.delta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plan.max_abs() < 1e-10);

    const auto g3 = SpectralDensity::constant(3.0);
    const auto plan3 = interpolate_noisy(white, g3, one, grid);
    CHECK(plan3.delta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("noisy interpolation with g = 0 equals the noiseless result") {
    const auto zero = SpectralDensity::constant(0.0);
    const auto plan = interpolate_noisy(ar1, zero, one, grid);
    CHECK(plan.delta == doctest::Approx(0.8).epsilon(1e-8));
}

TEST_CASE("matrix delta equals the quadrature of the error spectrum") {
    Rng rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const auto f = oracle::random_rational(rng, 3, 1.3);
        const auto a = oracle::random_functional(rng, 5);
        const auto plan = interpolate(f, a, grid);
        const double direct = oracle::mse_direct(a, plan, f, nullptr);
        CHECK(plan.delta == doctest::Approx(direct).epsilon(1e-7));

        const auto g = oracle::random_rational(rng, 2, 1.4);
        const auto noisy = interpolate_noisy(f, g, a, grid);
        const double directn = oracle::mse_direct(a, noisy, f, &g);
        CHECK(noisy.delta == doctest::Approx(directn).epsilon(1e-7));
    }
}

TEST_CASE("characteristic vanishes on the missing block") {
    Rng rng(43);
    for (int trial = 0; trial < 8; ++trial) {
        const auto f = oracle::random_rational(rng, 3, 1.3);
        const auto a = oracle::random_functional(rng, 5);
        const auto plan = interpolate(f, a, grid);
        CHECK(plan.support_leakage <= 1e-8);
        for (int j = 0; j <= plan.missing_upper; ++j) CHECK(std::abs(plan.at(j)) == 0.0);
    }
}

TEST_CASE("noise can only hurt: delta is monotone under added noise") {
    Rng rng(47);
    for (int trial = 0; trial < 6; ++trial) {
        const auto f = oracle::random_rational(rng, 3, 1.3);
        const auto g = oracle::random_rational(rng, 2, 1.4);
        const auto a = oracle::random_functional(rng, 4);
        const auto clean = interpolate(f, a, grid);
        const auto noisy = interpolate_noisy(f, g, a, grid);
        CHECK(noisy.delta >= clean.delta - 1e-9);
    }
}

TEST_CASE("interpolation enforces the minimality condition") {
    std::vector<double> vals(4096, 1.0);
    for (int i = 0; i < 400; ++i) vals[i] = 0.0;
    const auto bad = SpectralDensity::tabulated(vals);
    CHECK_THROWS_AS(interpolate(bad, one, grid), NumericError);
}

TEST_CASE("interpolation requires finite functionals") {
    const auto geo = CoefSeq::geometric(Complex(1.0, 0.0), Complex(0.5, 0.0), 32);
    CHECK_THROWS_AS(interpolate(white, geo, grid), InvalidInputError);
}
