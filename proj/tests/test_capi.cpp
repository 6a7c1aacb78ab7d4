#include <doctest.h>

#include <json.hpp>
#include <string>

#include "rstat.h"

using Json = nlohmann::json;

namespace {

struct Result {
    rstat_result* p = nullptr;
    ~Result() { rstat_result_free(p); }
    Json json() const { return Json::parse(rstat_result_json(p)); }
};

struct Density {
    rstat_density* p = nullptr;
    ~Density() { rstat_density_free(p); }
};

struct Coeffs {
    rstat_coeffs* p = nullptr;
    ~Coeffs() { rstat_coeffs_free(p); }
};

}  // namespace

TEST_CASE("density parse/eval through the C surface") {
    Density d;
    REQUIRE(rstat_density_parse(R"({"type":"rational","ma":[[1,0]],"ar":[[1,0]]})", &d.p) ==
            RSTAT_OK);
    double vals[64];
    REQUIRE(rstat_density_eval(d.p, 64, vals) == RSTAT_OK);
    for (double v : vals) CHECK(v == doctest::Approx(1.0));

    Density bad;
    CHECK(rstat_density_parse(R"({"type":"nope"})", &bad.p) == RSTAT_ERR_INVALID);
    CHECK(std::string(rstat_last_error()).find("schema") != std::string::npos);
}

TEST_CASE("factorize exposes coefficients and the geometric mean") {
    Density d;
    REQUIRE(rstat_density_parse(R"({"type":"rational","ma":[[1,0],[0.5,0]],"ar":[[1,0]]})",
                                &d.p) == RSTAT_OK);
    Result r;
    REQUIRE(rstat_factorize(d.p, 4096, 64, &r.p) == RSTAT_OK);
    const Json j = r.json();
    CHECK(j["d"][0][0].get<double>() == doctest::Approx(1.0));
    CHECK(j["d"][1][0].get<double>() == doctest::Approx(0.5));
    double gm = 0.0;
    REQUIRE(rstat_result_number(r.p, "geometric_mean", &gm) == RSTAT_OK);
    CHECK(gm == doctest::Approx(1.0));
}

TEST_CASE("predict and interpolate through the C surface") {
    Density f;
    REQUIRE(rstat_density_parse(R"({"type":"rational","ma":[[1,0]],"ar":[[1,0],[-0.5,0]]})",
                                &f.p) == RSTAT_OK);
    Coeffs a;
    REQUIRE(rstat_coeffs_parse(R"({"coeffs":[[1,0]]})", 64, &a.p) == RSTAT_OK);

    Result pr;
    REQUIRE(rstat_predict(f.p, nullptr, a.p, 4096, 64, &pr.p) == RSTAT_OK);
    double delta = 0.0;
    REQUIRE(rstat_result_number(pr.p, "delta", &delta) == RSTAT_OK);
    CHECK(delta == doctest::Approx(1.0).epsilon(1e-9));

    Result ir;
    REQUIRE(rstat_interpolate(f.p, nullptr, a.p, 4096, 64, &ir.p) == RSTAT_OK);
    REQUIRE(rstat_result_number(ir.p, "delta", &delta) == RSTAT_OK);
    CHECK(delta == doctest::Approx(0.8).epsilon(1e-9));

    Density g;
    REQUIRE(rstat_density_parse(R"({"type":"rational","ma":[[1,0]],"ar":[[1,0]]})", &g.p) ==
            RSTAT_OK);
    Result nr;
    REQUIRE(rstat_predict(f.p, g.p, a.p, 4096, 64, &nr.p) == RSTAT_OK);
    REQUIRE(rstat_result_number(nr.p, "delta", &delta) == RSTAT_OK);
    CHECK(delta > 1.0);  // noise cannot help
}

TEST_CASE("error statuses carry the failure class") {
    // minimality violation surfaces as a numeric error
    std::string grid_json = R"({"type":"grid","values":[)";
    for (int i = 0; i < 4096; ++i) grid_json += (i < 400 ? "0" : "1") + std::string(i + 1 < 4096 ? "," : "");
    grid_json += "]}";
    Density d;
    REQUIRE(rstat_density_parse(grid_json.c_str(), &d.p) == RSTAT_OK);
    Coeffs a;
    REQUIRE(rstat_coeffs_parse(R"({"coeffs":[[1,0]]})", 64, &a.p) == RSTAT_OK);
    Result r;
    CHECK(rstat_interpolate(d.p, nullptr, a.p, 4096, 64, &r.p) == RSTAT_ERR_NUMERIC);
    CHECK(std::string(rstat_last_error()).find("minimality") != std::string::npos);
}

TEST_CASE("game through the C surface") {
    Coeffs a;
    REQUIRE(rstat_coeffs_parse(R"({"coeffs":[[1,0],[1,0]]})", 0, &a.p) == RSTAT_OK);
    Result r;
    REQUIRE(rstat_game(a.p, 1.0, 0, &r.p) == RSTAT_OK);
    double value = 0.0;
    REQUIRE(rstat_result_number(r.p, "value", &value) == RSTAT_OK);
    CHECK(value == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("minimax and verify-saddle through the C surface") {
    const char* req = R"({
        "problem": "interpolation",
        "coeffs": {"coeffs": [[4,0],[1.7320508075688772,0]]},
        "f_class": {"class": "D0minus", "P": 1.0},
        "grid": 1024, "trunc": 64, "probes": 40, "seed": 3
    })";
    Result r;
    REQUIRE(rstat_minimax(req, &r.p) == RSTAT_OK);
    double value = 0.0;
    REQUIRE(rstat_result_number(r.p, "game_value", &value) == RSTAT_OK);
    CHECK(value == doctest::Approx(16.0).epsilon(1e-9));
    double hi = 0.0;
    REQUIRE(rstat_result_number(r.p, "residuals.saddle_hi", &hi) == RSTAT_OK);
    CHECK(hi >= -1e-6);

    // feed the solution back into the standalone audit
    Json audit;
    audit["solution"] = r.json();
    audit["coeffs"] = Json::parse(R"({"coeffs":[[4,0],[1.7320508075688772,0]]})");
    audit["f_class"] = Json::parse(R"({"class":"D0minus","P":1.0})");
    audit["probes"] = 40;
    audit["seed"] = 3;
    audit["grid"] = 1024;
    Result v;
    REQUIRE(rstat_verify_saddle(audit.dump().c_str(), &v.p) == RSTAT_OK);
    REQUIRE(rstat_result_number(v.p, "saddle_hi", &hi) == RSTAT_OK);
    CHECK(hi >= -1e-6);
}

TEST_CASE("simulate through the C surface") {
    Density f;
    REQUIRE(rstat_density_parse(R"({"type":"rational","ma":[[1,0]],"ar":[[1,0]]})", &f.p) ==
            RSTAT_OK);
    Coeffs a;
    REQUIRE(rstat_coeffs_parse(R"({"coeffs":[[1,0]]})", 64, &a.p) == RSTAT_OK);
    Result plan;
    REQUIRE(rstat_predict(f.p, nullptr, a.p, 4096, 64, &plan.p) == RSTAT_OK);

    Json req;
    req["density"] = Json::parse(R"({"type":"rational","ma":[[1,0]],"ar":[[1,0]]})");
    req["coeffs"] = Json::parse(R"({"coeffs":[[1,0]]})");
    req["plan"] = plan.json();
    req["n"] = 512;
    req["reps"] = 2000;
    req["seed"] = 7;
    req["burn_in"] = 128;
    Result r;
    REQUIRE(rstat_simulate(req.dump().c_str(), &r.p) == RSTAT_OK);
    double z = 0.0;
    REQUIRE(rstat_result_number(r.p, "z_score", &z) == RSTAT_OK);
    CHECK(std::abs(z) <= 4.0);
}
