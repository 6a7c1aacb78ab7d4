#include <doctest.h>

#include "oracles.hpp"
#include "rstat/serialize.hpp"

using namespace rstat;

TEST_CASE("density JSON round trip") {
    const auto rat = SpectralDensity::rational({{1.0, 0.0}, {0.5, -0.25}}, {{1.0, 0.0}, {-0.3, 0.0}});
    const auto back = density_from_json(density_to_json(rat));
    CHECK(back.kind() == SpectralDensity::Kind::rational);
    REQUIRE(back.ma_coeffs().size() == 2);
    CHECK(back.ma_coeffs()[1] == Complex(0.5, -0.25));
    CHECK(back.ar_coeffs()[1] == Complex(-0.3, 0.0));

    std::vector<double> vals(64, 1.0);
    vals[3] = 2.5;
    const auto tab = SpectralDensity::tabulated(vals);
    const auto back2 = density_from_json(density_to_json(tab));
    CHECK(back2.kind() == SpectralDensity::Kind::grid);
    CHECK(back2.grid_values()[3] == 2.5);
}

TEST_CASE("density schema violations are rejected") {
    CHECK_THROWS_AS(density_from_json(Json::parse(R"({"ma":[[1,0]]})")), InvalidInputError);
    CHECK_THROWS_AS(density_from_json(Json::parse(R"({"type":"spline"})")), InvalidInputError);
    CHECK_THROWS_AS(density_from_json(Json::parse(R"({"type":"grid","values":[1,"x"]})")),
                    InvalidInputError);
    CHECK_THROWS_AS(density_from_json(Json::parse(R"({"type":"rational","ma":[[1]]})")),
                    InvalidInputError);
}

TEST_CASE("coefficients: finite vectors, geometric rules, plain numbers") {
    const auto fin = coeffs_from_json(Json::parse(R"({"coeffs":[[1,0],[0.5,0]]})"), 64);
    CHECK(fin.is_finite());
    CHECK(fin.size() == 2);
    CHECK(fin.at(1) == Complex(0.5, 0.0));

    // bare numbers are accepted for real coefficients
    const auto fin2 = coeffs_from_json(Json::parse(R"({"coeffs":[1, 0.25]})"), 64);
    CHECK(fin2.at(1) == Complex(0.25, 0.0));

    const auto geo = coeffs_from_json(
        Json::parse(R"({"rule":{"type":"geometric","ratio":[0.5,0]},"truncation":32})"), 64);
    CHECK_FALSE(geo.is_finite());
    CHECK(geo.size() == 32);
    CHECK(geo.at(3) == Complex(0.125, 0.0));

    // truncation hint applies when the file omits it
    const auto geo2 =
        coeffs_from_json(Json::parse(R"({"rule":{"type":"geometric","ratio":[0.5,0]}})"), 16);
    CHECK(geo2.size() == 16);
}

TEST_CASE("geometric tail certificates are exact") {
    const auto geo = CoefSeq::geometric(Complex(1.0, 0.0), Complex(0.5, 0.0), 8);
    // sum_{j>=8} (j+1) 0.25^j against a long explicit sum
    double want = 0.0;
    for (int j = 8; j < 200; ++j) want += (j + 1) * std::pow(0.25, j);
    CHECK(geo.tail_weighted_energy() == doctest::Approx(want).epsilon(1e-12));
    double total = 0.0;
    for (int j = 0; j < 200; ++j) total += (j + 1) * std::pow(0.25, j);
    CHECK(geo.total_weighted_energy() == doctest::Approx(total).epsilon(1e-12));
    // required truncation reaches the certificate level
    const auto n = geo.required_truncation(1e-10);
    const auto big = CoefSeq::geometric(Complex(1.0, 0.0), Complex(0.5, 0.0), n);
    CHECK(big.tail_weighted_energy() <= 1e-10 * big.total_weighted_energy());
}

TEST_CASE("plan JSON round trip preserves support") {
    EstimatePlan p;
    p.problem = ProblemTag::interpolation;
    p.missing_upper = 2;
    p.min_index = -3;
    p.h = {Complex(0.1, 0.2), Complex(0.0, -0.4), Complex(1.0, 0.0)};
    p.delta = 2.5;
    p.support_leakage = 1e-12;
    const auto back = plan_from_json(plan_to_json(p));
    CHECK(back.problem == ProblemTag::interpolation);
    CHECK(back.missing_upper == 2);
    CHECK(back.min_index == -3);
    CHECK(back.h == p.h);
    CHECK(back.delta == 2.5);

    // weight inside the missing block is rejected
    Json bad = plan_to_json(p);
    bad["min_index"] = 0;
    CHECK_THROWS_AS(plan_from_json(bad), InvalidInputError);
}

TEST_CASE("density class JSON round trip") {
    DensityClass c;
    c.tag = DensityClassTag::Deps;
    c.eps = 0.2;
    c.power = 1.5;
    c.center = SpectralDensity::constant(1.0);
    const auto back = density_class_from_json(density_class_to_json(c));
    CHECK(back.tag == DensityClassTag::Deps);
    CHECK(back.eps == 0.2);
    CHECK(back.power == 1.5);
    REQUIRE(back.center.has_value());
}

TEST_CASE("emitted JSON reparses under the schema (round trip property)") {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = oracle::random_rational(rng, 4, 1.2);
        const auto j = density_to_json(f);
        const auto back = density_from_json(j);
        const Grid g(256);
        const auto va = f.eval(g);
        const auto vb = back.eval(g);
        for (std::uint32_t m = 0; m < g.size(); m += 13)
            CHECK(va[m] == doctest::Approx(vb[m]).epsilon(1e-14));
    }
}
