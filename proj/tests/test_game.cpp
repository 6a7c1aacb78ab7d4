#include <doctest.h>

#include "oracles.hpp"
#include "rstat/game.hpp"

using namespace rstat;

TEST_CASE("two-coefficient game reproduces the worked eigenpair") {
    const auto sol = solve_game(CoefSeq::finite({{1.0, 0.0}, {1.0, 0.0}}), 1.0, 2);
    const auto want = oracle::sym2x2_top(2.0, 1.0, 1.0);
    CHECK(sol.value == doctest::Approx(want.value).epsilon(1e-14));
    CHECK(sol.phi[0].real() == doctest::Approx(want.v0).epsilon(1e-12));
    CHECK(sol.phi[1].real() == doctest::Approx(want.v1).epsilon(1e-12));
    // the optimal estimate keeps only eps(-1) with weight a(0) phi(1)
    REQUIRE(sol.estimate_coeffs.size() == 1);
    CHECK(sol.estimate_coeffs[0].real() == doctest::Approx(want.v1).epsilon(1e-12));
}

TEST_CASE("single-coefficient game is the power itself") {
    const auto sol = solve_game(CoefSeq::finite({{1.0, 0.0}}), 5.0, 1);
    CHECK(sol.value == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(sol.phi[0].real() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
    CHECK(sol.estimate_coeffs.empty());
}

TEST_CASE("geometric functional approaches the closed-form game value") {
    const auto a = CoefSeq::geometric(Complex(1.0, 0.0), Complex(std::exp(-1.0), 0.0), 200);
    const auto sol = solve_game(a, 1.0, 200);
    const double want = 1.0 / ((1.0 - std::exp(-2.0)) * (1.0 - std::exp(-2.0)));
    CHECK(sol.value == doctest::Approx(want).epsilon(1e-10));
    const double c = std::sqrt(1.0 - std::exp(-2.0));
    for (int p = 0; p < 12; ++p)
        CHECK(sol.phi[static_cast<std::size_t>(p)].real() ==
              doctest::Approx(c * std::exp(-p)).epsilon(1e-8));
    CHECK(sol.tail_bound < 1e-10);
}

TEST_CASE("truncation certificate refuses undersized geometric functionals") {
    const auto a = CoefSeq::geometric(Complex(1.0, 0.0), Complex(0.9, 0.0), 20);
    CHECK_THROWS_AS(solve_game(a, 1.0, 20), NumericError);
}

TEST_CASE("scaling the power scales the value and the sequence") {
    const auto a = CoefSeq::finite({{1.0, 0.0}, {0.5, 0.0}, {-0.25, 0.0}});
    const auto base = solve_game(a, 1.0, 3);
    const auto scaled = solve_game(a, 4.0, 3);
    CHECK(scaled.value == doctest::Approx(4.0 * base.value).epsilon(1e-12));
    for (std::size_t i = 0; i < base.phi.size(); ++i)
        CHECK(scaled.phi[i].real() == doctest::Approx(2.0 * base.phi[i].real()).epsilon(1e-12));
}

TEST_CASE("no admissible direction beats the game value") {
    const auto a = CoefSeq::finite({{1.0, 0.0}, {0.7, 0.0}, {0.2, 0.0}, {-0.4, 0.0}});
    const double power = 2.0;
    const auto sol = solve_game(a, power, 4);
    const auto q = build_game_matrix(a.coeffs(), 4);
    Rng rng(17);
    for (int probe = 0; probe < 1000; ++probe) {
        CVector d(4);
        for (int i = 0; i < 4; ++i) d(i) = Complex(rng.symmetric(), rng.symmetric());
        d *= std::sqrt(power) / d.norm();
        const double quad = (d.adjoint() * (q.matrix() * d))(0).real();
        CHECK(quad <= sol.value + 1e-9);
    }
}

TEST_CASE("least favourable sequence reproduces the value through ||A d||^2") {
    Rng rng(23);
    for (int trial = 0; trial < 6; ++trial) {
        const auto a = oracle::random_functional(rng, 6);
        const double power = 0.5 + 2.0 * rng.uniform();
        const auto sol = solve_game(a, power, static_cast<Eigen::Index>(a.size()));
        // sum_k |sum_l a(k+l) phi(l)|^2 over the finite window
        double acc = 0.0;
        for (std::uint32_t k = 0; k < a.size(); ++k) {
            Complex s(0.0, 0.0);
            for (std::uint32_t l = 0; k + l < a.size() && l < sol.phi.size(); ++l)
                s += a.at(k + l) * sol.phi[l];
            acc += std::norm(s);
        }
        CHECK(acc == doctest::Approx(sol.value).epsilon(1e-8));
    }
}

TEST_CASE("all-zero functionals yield a zero-value game") {
    const auto sol = solve_game(CoefSeq::finite({{0.0, 0.0}, {0.0, 0.0}}), 1.0, 2);
    CHECK(sol.value == 0.0);
    CHECK(sol.phi.empty());
}
