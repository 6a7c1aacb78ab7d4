#include "rstat.h"

#include <cstring>
#include <string>

#include "rstat/errors.hpp"
#include "rstat/game.hpp"
#include "rstat/serialize.hpp"

namespace {

thread_local std::string g_last_error;

rstat_status translate(const std::exception& e) {
    g_last_error = e.what();
    if (const auto* err = dynamic_cast<const rstat::Error*>(&e))
        return static_cast<rstat_status>(static_cast<int>(err->code()));
    return RSTAT_ERR_INVALID;
}

}  // namespace

struct rstat_density {
    rstat::SpectralDensity value;
};

struct rstat_coeffs {
    rstat::CoefSeq value;
};

struct rstat_result {
    rstat::Json value;
    std::string rendered;
    std::vector<std::string> warnings;
};

namespace {

rstat_result* make_result(rstat::Json j, std::vector<std::string> warnings = {}) {
    auto* r = new rstat_result{std::move(j), {}, std::move(warnings)};
    if (!r->warnings.empty()) r->value["warnings"] = r->warnings;
    r->rendered = r->value.dump();
    return r;
}

#define RSTAT_GUARD_BEGIN try {
#define RSTAT_GUARD_END                         \
    }                                           \
    catch (const std::exception& e) {           \
        return translate(e);                    \
    }                                           \
    catch (...) {                               \
        g_last_error = "unknown failure";       \
        return RSTAT_ERR_NUMERIC;               \
    }

}  // namespace

extern "C" {

const char* rstat_version(void) { return "0.1.0"; }

const char* rstat_last_error(void) { return g_last_error.c_str(); }

rstat_status rstat_density_parse(const char* json, rstat_density** out) {
    if (!json || !out) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const rstat::Json j = rstat::Json::parse(json, nullptr, true);
    *out = new rstat_density{rstat::density_from_json(j)};
    return RSTAT_OK;
    RSTAT_GUARD_END
}

void rstat_density_free(rstat_density* d) { delete d; }

rstat_status rstat_density_eval(const rstat_density* d, uint32_t grid_size,
                                double* out_values) {
    if (!d || !out_values) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const rstat::Grid grid(grid_size);
    const std::vector<double> v = d->value.eval(grid);
    std::memcpy(out_values, v.data(), v.size() * sizeof(double));
    return RSTAT_OK;
    RSTAT_GUARD_END
}

rstat_status rstat_coeffs_parse(const char* json, uint32_t truncation_hint,
                                rstat_coeffs** out) {
    if (!json || !out) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const rstat::Json j = rstat::Json::parse(json, nullptr, true);
    *out = new rstat_coeffs{rstat::coeffs_from_json(j, truncation_hint)};
    return RSTAT_OK;
    RSTAT_GUARD_END
}

void rstat_coeffs_free(rstat_coeffs* c) { delete c; }

rstat_status rstat_factorize(const rstat_density* d, uint32_t grid_size, uint32_t truncation,
                             rstat_result** out) {
    if (!d || !out) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const rstat::Grid grid(grid_size);
    const rstat::Factorization fact = rstat::factorize(d->value, grid, truncation);
    std::vector<std::string> warnings;
    if (fact.clamped_fraction > 0.0)
        warnings.push_back("density clamped on fraction " +
                           std::to_string(fact.clamped_fraction) + " of the grid");
    *out = make_result(rstat::factorization_to_json(fact), std::move(warnings));
    return RSTAT_OK;
    RSTAT_GUARD_END
}

}  // extern "C"

namespace {

rstat_status run_estimation(bool interpolation, const rstat_density* f, const rstat_density* g,
                            const rstat_coeffs* a, uint32_t grid_size, uint32_t truncation,
                            rstat_result** out) {
    if (!f || !a || !out) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const rstat::Grid grid(grid_size);
    rstat::EstimatePlan plan;
    if (interpolation) {
        plan = g ? rstat::interpolate_noisy(f->value, g->value, a->value, grid, truncation)
                 : rstat::interpolate(f->value, a->value, grid, truncation);
    } else {
        plan = g ? rstat::predict_noisy(f->value, g->value, a->value, grid, truncation)
                 : rstat::predict(f->value, a->value, grid, truncation);
    }
    std::vector<std::string> warnings;
    if (plan.support_leakage > 1e-8)
        warnings.push_back("characteristic leaked " + std::to_string(plan.support_leakage) +
                           " of its mass outside the admissible support");
    *out = make_result(rstat::plan_to_json(plan), std::move(warnings));
    return RSTAT_OK;
    RSTAT_GUARD_END
}

}  // namespace

extern "C" {

rstat_status rstat_predict(const rstat_density* f, const rstat_density* g,
                           const rstat_coeffs* a, uint32_t grid_size, uint32_t truncation,
                           rstat_result** out) {
    return run_estimation(false, f, g, a, grid_size, truncation, out);
}

rstat_status rstat_interpolate(const rstat_density* f, const rstat_density* g,
                               const rstat_coeffs* a, uint32_t grid_size, uint32_t truncation,
                               rstat_result** out) {
    return run_estimation(true, f, g, a, grid_size, truncation, out);
}

rstat_status rstat_game(const rstat_coeffs* a, double power, uint32_t order,
                        rstat_result** out) {
    if (!a || !out) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const Eigen::Index n =
        order > 0 ? static_cast<Eigen::Index>(order)
                  : static_cast<Eigen::Index>(a->value.size());
    const rstat::GameSolution sol = rstat::solve_game(a->value, power, n);
    rstat::Json j;
    j["value"] = sol.value;
    j["phi"] = rstat::Json::array();
    for (const rstat::Complex& v : sol.phi) j["phi"].push_back(rstat::complex_to_json(v));
    j["estimate_coeffs"] = rstat::Json::array();
    for (const rstat::Complex& v : sol.estimate_coeffs)
        j["estimate_coeffs"].push_back(rstat::complex_to_json(v));
    j["tail_bound"] = sol.tail_bound;
    *out = make_result(std::move(j));
    return RSTAT_OK;
    RSTAT_GUARD_END
}

}  // extern "C"

namespace {

rstat::MinimaxConfig config_from_request(const rstat::Json& req) {
    rstat::MinimaxConfig cfg;
    cfg.grid_size = req.value("grid", rstat::kDefaultGridSize);
    cfg.truncation = req.value("trunc", rstat::kDefaultTruncation);
    cfg.seed = req.value("seed", static_cast<std::uint64_t>(1));
    cfg.saddle_probes = req.value("probes", 500);
    cfg.probe_amplitude = req.value("amplitude", 1e-4);
    cfg.threads = req.value("threads", 1);
    cfg.damping = req.value("damping", 0.5);
    cfg.max_iter = req.value("max_iter", 500);
    return cfg;
}

}  // namespace

extern "C" {

rstat_status rstat_minimax(const char* request_json, rstat_result** out) {
    if (!request_json || !out) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const rstat::Json req = rstat::Json::parse(request_json, nullptr, true);
    const rstat::MinimaxConfig cfg = config_from_request(req);
    const rstat::Grid grid(cfg.grid_size);
    const rstat::ProblemKind problem =
        req.value("problem", std::string("extrapolation")) == "interpolation"
            ? rstat::ProblemKind::interpolation
            : rstat::ProblemKind::extrapolation;
    const rstat::CoefSeq a = rstat::coeffs_from_json(req.at("coeffs"), cfg.truncation);
    const bool noisy = req.value("noisy", false);

    rstat::MinimaxSolution sol;
    if (noisy) {
        const rstat::DensityClass fcls = rstat::density_class_from_json(req.at("f_class"));
        const rstat::DensityClass gcls = rstat::density_class_from_json(req.at("g_class"));
        sol = rstat::lf_noisy_pair(a, fcls, gcls, problem, cfg);
    } else {
        const rstat::DensityClass fcls = rstat::density_class_from_json(req.at("f_class"));
        if (problem == rstat::ProblemKind::extrapolation &&
            fcls.tag == rstat::DensityClassTag::D0) {
            const std::uint32_t order = req.value("order", a.size());
            sol = rstat::lf_extrap_D0(a, fcls.power, order, cfg);
        } else {
            sol = rstat::lf_fixed_point(a, fcls, problem, cfg);
        }
    }
    *out = make_result(rstat::minimax_solution_to_json(sol, grid), sol.notes);
    return RSTAT_OK;
    RSTAT_GUARD_END
}

rstat_status rstat_simulate(const char* request_json, rstat_result** out) {
    if (!request_json || !out) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const rstat::Json req = rstat::Json::parse(request_json, nullptr, true);
    const rstat::SpectralDensity f = rstat::density_from_json(req.at("density"));
    std::optional<rstat::SpectralDensity> g;
    if (req.contains("noise")) g = rstat::density_from_json(req.at("noise"));
    const rstat::CoefSeq a = rstat::coeffs_from_json(req.at("coeffs"), 512);
    const rstat::EstimatePlan plan = rstat::plan_from_json(req.at("plan"));
    rstat::SimConfig cfg;
    cfg.n = req.value("n", 4096u);
    cfg.reps = req.value("reps", 10000u);
    cfg.seed = req.value("seed", static_cast<std::uint64_t>(1));
    cfg.burn_in = req.value("burn_in", 128u);
    cfg.estimator_truncation = req.value("estimator_truncation", 64u);
    cfg.threads = req.value("threads", 1);
    const rstat::MCReport rep = rstat::mc_mse(f, g ? &*g : nullptr, a, plan, cfg);
    *out = make_result(rstat::mc_report_to_json(rep));
    return RSTAT_OK;
    RSTAT_GUARD_END
}

rstat_status rstat_verify_saddle(const char* request_json, rstat_result** out) {
    if (!request_json || !out) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const rstat::Json req = rstat::Json::parse(request_json, nullptr, true);
    const rstat::Json& solj = req.at("solution");
    const rstat::Grid grid(req.value("grid", rstat::kDefaultGridSize));

    rstat::MinimaxSolution sol;
    sol.lf_density = rstat::density_from_json(solj.at("lf_density"));
    if (solj.contains("lf_noise"))
        sol.lf_noise = rstat::density_from_json(solj.at("lf_noise"));
    sol.h0 = rstat::plan_from_json(solj.at("h"));
    sol.game_value = solj.value("game_value", sol.h0.delta);

    const rstat::CoefSeq a = rstat::coeffs_from_json(req.at("coeffs"), 512);
    const rstat::DensityClass fcls = rstat::density_class_from_json(req.at("f_class"));
    std::optional<rstat::DensityClass> gcls;
    if (req.contains("g_class")) gcls = rstat::density_class_from_json(req.at("g_class"));

    const rstat::SaddleReport rep = rstat::verify_saddle(
        sol, a, fcls, gcls ? &*gcls : nullptr, req.value("probes", 500),
        req.value("seed", static_cast<std::uint64_t>(1)), req.value("amplitude", 1e-4), grid,
        req.value("threads", 1));
    rstat::Json j;
    j["saddle_lo"] = rep.saddle_lo;
    j["saddle_hi"] = rep.saddle_hi;
    j["probes"] = rep.probes;
    j["skipped"] = rep.skipped;
    j["worst_density_probe"] = rep.worst_density_probe;
    j["worst_characteristic_probe"] = rep.worst_characteristic_probe;
    *out = make_result(std::move(j));
    return RSTAT_OK;
    RSTAT_GUARD_END
}

const char* rstat_result_json(const rstat_result* r) {
    return r ? r->rendered.c_str() : "";
}

rstat_status rstat_result_number(const rstat_result* r, const char* key, double* out) {
    if (!r || !key || !out) {
        g_last_error = "null argument";
        return RSTAT_ERR_INVALID;
    }
    RSTAT_GUARD_BEGIN
    const rstat::Json* cur = &r->value;
    std::string path(key);
    std::size_t pos = 0;
    while (pos != std::string::npos) {
        const std::size_t dot = path.find('.', pos);
        const std::string part = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (!cur->is_object() || !cur->contains(part)) {
            g_last_error = "no such field: " + path;
            return RSTAT_ERR_INVALID;
        }
        cur = &cur->at(part);
        pos = dot == std::string::npos ? dot : dot + 1;
    }
    if (!cur->is_number()) {
        g_last_error = "field is not numeric: " + path;
        return RSTAT_ERR_INVALID;
    }
    *out = cur->get<double>();
    return RSTAT_OK;
    RSTAT_GUARD_END
}

size_t rstat_result_warning_count(const rstat_result* r) {
    return r ? r->warnings.size() : 0;
}

const char* rstat_result_warning(const rstat_result* r, size_t index) {
    if (!r || index >= r->warnings.size()) return "";
    return r->warnings[index].c_str();
}

void rstat_result_free(rstat_result* r) { delete r; }

}  // extern "C"
