#include "rstat/serialize.hpp"

#include "rstat/errors.hpp"

namespace rstat {

namespace {

[[noreturn]] void schema_error(const std::string& what) {
    throw InvalidInputError("schema: " + what);
}

std::vector<Complex> complex_vector_from_json(const Json& j, const char* what) {
    if (!j.is_array()) schema_error(std::string(what) + " must be an array");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const Json& e : j) out.push_back(complex_from_json(e));
    return out;
}

Json complex_vector_to_json(const std::vector<Complex>& v) {
    Json out = Json::array();
    for (const Complex& z : v) out.push_back(complex_to_json(z));
    return out;
}

}  // namespace

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        schema_error("complex numbers are [re, im] pairs");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

Json density_to_json(const SpectralDensity& d) {
    Json out;
    if (d.kind() == SpectralDensity::Kind::rational) {
        out["type"] = "rational";
        out["ma"] = complex_vector_to_json(d.ma_coeffs());
        out["ar"] = complex_vector_to_json(d.ar_coeffs());
    } else {
        out["type"] = "grid";
        out["values"] = d.grid_values();
    }
    return out;
}

SpectralDensity density_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("type")) schema_error("density needs a type field");
    const std::string type = j.at("type").get<std::string>();
    if (type == "rational") {
        if (!j.contains("ma")) schema_error("rational density needs ma coefficients");
        std::vector<Complex> ma = complex_vector_from_json(j.at("ma"), "ma");
        std::vector<Complex> ar =
            j.contains("ar") ? complex_vector_from_json(j.at("ar"), "ar")
                             : std::vector<Complex>{Complex(1.0, 0.0)};
        return SpectralDensity::rational(std::move(ma), std::move(ar));
    }
    if (type == "grid") {
        if (!j.contains("values") || !j.at("values").is_array())
            schema_error("grid density needs a values array");
        std::vector<double> values;
        for (const Json& e : j.at("values")) {
            if (!e.is_number()) schema_error("grid values must be numbers");
            values.push_back(e.get<double>());
        }
        return SpectralDensity::tabulated(std::move(values));
    }
    schema_error("unknown density type: " + type);
}

CoefSeq coeffs_from_json(const Json& j, std::uint32_t truncation_hint) {
    if (!j.is_object()) schema_error("functional must be an object");
    if (j.contains("coeffs"))
        return CoefSeq::finite(complex_vector_from_json(j.at("coeffs"), "coeffs"));
    if (j.contains("rule")) {
        const Json& rule = j.at("rule");
        const std::string type = rule.value("type", "");
        if (type != "geometric") schema_error("unknown functional rule: " + type);
        const Complex scale =
            rule.contains("scale") ? complex_from_json(rule.at("scale")) : Complex(1.0, 0.0);
        if (!rule.contains("ratio")) schema_error("geometric rule needs a ratio");
        const Complex ratio = complex_from_json(rule.at("ratio"));
        const std::uint32_t trunc = j.value("truncation", truncation_hint);
        return CoefSeq::geometric(scale, ratio, trunc);
    }
    schema_error("functional needs coeffs or a rule");
}

Json coeffs_to_json(const CoefSeq& a) {
    Json out;
    out["coeffs"] = complex_vector_to_json(a.coeffs());
    return out;
}

Json plan_to_json(const EstimatePlan& p) {
    Json out;
    out["problem"] = problem_tag_name(p.problem);
    out["missing_upper"] = p.missing_upper;
    out["min_index"] = p.min_index;
    out["h"] = complex_vector_to_json(p.h);
    out["delta"] = p.delta;
    out["support_leakage"] = p.support_leakage;
    return out;
}

EstimatePlan plan_from_json(const Json& j) {
    if (!j.is_object()) schema_error("plan must be an object");
    EstimatePlan p;
    p.problem = problem_tag_from_name(j.value("problem", std::string("extrapolation")));
    p.missing_upper = j.value("missing_upper", 0);
    p.min_index = j.value("min_index", 0);
    if (j.contains("h")) p.h = complex_vector_from_json(j.at("h"), "h");
    p.delta = j.value("delta", 0.0);
    p.support_leakage = j.value("support_leakage", 0.0);
    for (std::size_t i = 0; i < p.h.size(); ++i) {
        const int idx = p.min_index + static_cast<int>(i);
        if (!p.index_admissible(idx) && std::abs(p.h[i]) != 0.0)
            schema_error("plan carries weight outside its admissible support");
    }
    return p;
}

Json factorization_to_json(const Factorization& f) {
    Json out;
    out["d"] = complex_vector_to_json(f.d);
    out["geometric_mean"] = f.geometric_mean;
    out["residual"] = f.residual;
    out["clamped_fraction"] = f.clamped_fraction;
    return out;
}

Json density_class_to_json(const DensityClass& c) {
    Json out;
    out["class"] = class_tag_name(c.tag);
    out["P"] = c.power;
    if (c.eps != 0.0) out["eps"] = c.eps;
    if (!c.moments.empty()) out["moments"] = c.moments;
    if (c.inverse_moments) out["inverse"] = true;
    if (c.lower) out["v"] = density_to_json(*c.lower);
    if (c.upper) out["u"] = density_to_json(*c.upper);
    if (c.center) out["center"] = density_to_json(*c.center);
    return out;
}

DensityClass density_class_from_json(const Json& j) {
    if (!j.is_object()) schema_error("class parameters must be an object");
    DensityClass c;
    if (j.contains("class")) c.tag = class_tag_from_name(j.at("class").get<std::string>());
    c.power = j.value("P", 0.0);
    c.eps = j.value("eps", 0.0);
    if (j.contains("moments")) {
        for (const Json& e : j.at("moments")) c.moments.push_back(e.get<double>());
    }
    c.inverse_moments = j.value("inverse", false);
    if (j.contains("v")) c.lower = density_from_json(j.at("v"));
    if (j.contains("u")) c.upper = density_from_json(j.at("u"));
    if (j.contains("center")) c.center = density_from_json(j.at("center"));
    return c;
}

Json minimax_solution_to_json(const MinimaxSolution& s, const Grid& grid) {
    Json out;
    out["game_value"] = s.game_value;
    out["lf_density"] = Json{{"type", "grid"}, {"values", s.lf_density.eval(grid)}};
    if (s.lf_noise)
        out["lf_noise"] = Json{{"type", "grid"}, {"values", s.lf_noise->eval(grid)}};
    out["h"] = plan_to_json(s.h0);
    out["delta"] = s.h0.delta;
    out["residuals"] = Json{{"fixedpoint", s.residuals.fixedpoint},
                            {"constraint", s.residuals.constraint},
                            {"saddle_lo", s.residuals.saddle_lo},
                            {"saddle_hi", s.residuals.saddle_hi}};
    out["iterations"] = s.iterations;
    if (!s.notes.empty()) out["notes"] = s.notes;
    return out;
}

Json mc_report_to_json(const MCReport& r) {
    Json out;
    out["empirical_delta"] = r.empirical_delta;
    out["stderr"] = r.stderr_mean;
    out["theoretical_delta"] = r.theoretical_delta;
    out["z_score"] = r.z_score;
    out["reps"] = r.reps;
    out["generator_tail_energy"] = r.generator_tail_energy;
    out["estimator_tail_energy"] = r.estimator_tail_energy;
    return out;
}

}  // namespace rstat
