// Command-line front end for the stationary-sequence estimation library.
// Links only the C interface; all numerics live behind rstat.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rstat.h"

namespace {

using Json = nlohmann::json;

struct CliError {
    int code;
    std::string reason;
};

[[noreturn]] void fail(int code, const std::string& reason) { throw CliError{code, reason}; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(2, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// FNV-1a 64-bit content digest for the input echo.
std::string digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct DensityHandle {
    rstat_density* p = nullptr;
    ~DensityHandle() { rstat_density_free(p); }
};
struct CoeffsHandle {
    rstat_coeffs* p = nullptr;
    ~CoeffsHandle() { rstat_coeffs_free(p); }
};
struct ResultHandle {
    rstat_result* p = nullptr;
    ~ResultHandle() { rstat_result_free(p); }
};

void check(rstat_status st) {
    if (st != RSTAT_OK) fail(static_cast<int>(st), rstat_last_error());
}

void load_density(const std::string& path, DensityHandle& out, Json& inputs) {
    const std::string bytes = read_file(path);
    inputs[path] = digest(bytes);
    check(rstat_density_parse(bytes.c_str(), &out.p));
}

void load_coeffs(const std::string& path, uint32_t trunc, CoeffsHandle& out, Json& inputs) {
    const std::string bytes = read_file(path);
    inputs[path] = digest(bytes);
    check(rstat_coeffs_parse(bytes.c_str(), trunc, &out.p));
}

void write_csv_series(const std::string& path, uint32_t grid_size,
                      const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(2, "cannot write " + path);
    out << "lambda,value";
    if (columns.size() > 1) out << ",value2";
    out << "\n";
    const double pi = 3.14159265358979323846;
    char buf[128];
    for (uint32_t m = 0; m < grid_size; ++m) {
        const double lambda = -pi + 2.0 * pi * m / grid_size;
        std::snprintf(buf, sizeof(buf), "%.17g", lambda);
        out << buf;
        for (const auto& col : columns) {
            std::snprintf(buf, sizeof(buf), ",%.17g", col[m]);
            out << buf;
        }
        out << "\n";
    }
}

std::vector<double> json_number_array(const Json& j) {
    std::vector<double> out;
    for (const Json& e : j) out.push_back(e.get<double>());
    return out;
}

void emit_result(const Json& report, const std::string& out_path) {
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) fail(2, "cannot write " + out_path);
        out << text;
    }
}

Json wrap_report(const std::string& command, const Json& inputs, const Json& outputs) {
    Json report;
    report["command"] = command;
    report["inputs"] = inputs;
    report["outputs"] = outputs;
    Json warnings = Json::array();
    if (outputs.contains("warnings"))
        for (const Json& w : outputs.at("warnings")) warnings.push_back(w);
    report["warnings"] = warnings;
    return report;
}

uint32_t env_default_grid() {
    if (const char* env = std::getenv("RSTAT_DEFAULT_GRID")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 64) return static_cast<uint32_t>(v);
    }
    return 4096;
}

int run(int argc, char** argv) {
    CLI::App app{"minimax-robust estimation for stationary sequences"};
    app.require_subcommand(1);
    app.fallthrough();

    uint32_t grid = env_default_grid();
    uint32_t trunc = 512;
    int threads = 1;
    std::string out_path;
    app.add_option("--grid", grid, "quadrature grid size (power of two >= 64)")
        ->envname("RSTAT_DEFAULT_GRID");
    app.add_option("--trunc", trunc, "series/operator truncation");
    app.add_option("--threads", threads, "worker threads for probe/replication loops");
    app.add_option("--out", out_path, "write the JSON report here instead of stdout");

    std::string density_path, noise_path, coeffs_path, plan_path, params_path, pin_f_path;
    std::string emit_density_path, emit_char_path;
    double power = 1.0;
    std::string problem = "extrapolation";
    std::string fclass = "D0", gclass;
    bool noisy = false;
    uint64_t seed = 1;
    uint32_t reps = 10000, length = 4096, burn_in = 128, est_trunc = 64;
    int probes = 500;
    double amplitude = 1e-4;

    CLI::App* cmd_factorize = app.add_subcommand("factorize", "canonical factorization of a density");
    cmd_factorize->add_option("--density", density_path, "density JSON file")->required();

    CLI::App* cmd_predict = app.add_subcommand("predict", "extrapolate a functional from the past");
    cmd_predict->add_option("--density", density_path, "signal density JSON")->required();
    cmd_predict->add_option("--noise", noise_path, "noise density JSON");
    cmd_predict->add_option("--coeffs", coeffs_path, "functional coefficients JSON")->required();

    CLI::App* cmd_interp = app.add_subcommand("interpolate", "estimate a missing block");
    cmd_interp->add_option("--density", density_path, "signal density JSON")->required();
    cmd_interp->add_option("--noise", noise_path, "noise density JSON");
    cmd_interp->add_option("--coeffs", coeffs_path, "functional coefficients JSON")->required();

    CLI::App* cmd_game = app.add_subcommand("game", "power-constrained estimation game");
    cmd_game->add_option("--coeffs", coeffs_path, "functional coefficients JSON")->required();
    cmd_game->add_option("--power", power, "power bound P")->required();

    CLI::App* cmd_minimax = app.add_subcommand("minimax", "least favourable density and robust estimate");
    cmd_minimax->add_option("--problem", problem, "extrapolation|interpolation")
        ->check(CLI::IsMember({"extrapolation", "interpolation"}));
    cmd_minimax->add_flag("--noisy", noisy, "signal observed with stationary noise");
    cmd_minimax->add_option("--class", fclass, "admissibility class of the signal density");
    cmd_minimax->add_option("--g-class", gclass, "admissibility class of the noise density");
    cmd_minimax->add_option("--coeffs", coeffs_path, "functional coefficients JSON")->required();
    cmd_minimax->add_option("--class-params", params_path, "class parameter JSON")->required();
    cmd_minimax->add_option("--pin-f", pin_f_path, "pin the signal density to this JSON file");
    cmd_minimax->add_option("--seed", seed, "audit seed");
    cmd_minimax->add_option("--probes", probes, "saddle audit probes");
    cmd_minimax->add_option("--amplitude", amplitude, "saddle audit probe amplitude");
    cmd_minimax->add_option("--emit-density", emit_density_path, "CSV of the least favourable density");
    cmd_minimax->add_option("--emit-characteristic", emit_char_path, "CSV of the robust characteristic");

    CLI::App* cmd_sim = app.add_subcommand("simulate", "Monte Carlo validation of a plan");
    cmd_sim->add_option("--density", density_path, "signal density JSON")->required();
    cmd_sim->add_option("--noise", noise_path, "noise density JSON");
    cmd_sim->add_option("--coeffs", coeffs_path, "functional coefficients JSON")->required();
    cmd_sim->add_option("--plan", plan_path, "estimate plan JSON")->required();
    cmd_sim->add_option("--n", length, "series length");
    cmd_sim->add_option("--reps", reps, "replications");
    cmd_sim->add_option("--seed", seed, "generator seed");
    cmd_sim->add_option("--burn-in", burn_in, "warmup samples to discard");
    cmd_sim->add_option("--estimator-trunc", est_trunc, "estimator support truncation");

    CLI::App* cmd_saddle = app.add_subcommand("verify-saddle", "audit a stored minimax solution");
    cmd_saddle->add_option("--solution", plan_path, "minimax solution JSON")->required();
    cmd_saddle->add_option("--coeffs", coeffs_path, "functional coefficients JSON")->required();
    cmd_saddle->add_option("--class-params", params_path, "class parameter JSON")->required();
    cmd_saddle->add_option("--seed", seed, "audit seed");
    cmd_saddle->add_option("--probes", probes, "audit probes");
    cmd_saddle->add_option("--amplitude", amplitude, "audit probe amplitude");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);
            return 0;
        }
        std::cerr << "error: invalid arguments: " << e.what() << "\n";
        return 2;
    }

    Json inputs;
    std::string command;
    for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

    // wall time goes to stderr only: emitted files must stay byte-identical
    // across reruns of the same inputs
    const auto t0 = std::chrono::steady_clock::now();

    Json outputs;
    if (cmd_factorize->parsed()) {
        DensityHandle d;
        load_density(density_path, d, inputs);
        ResultHandle r;
        check(rstat_factorize(d.p, grid, trunc, &r.p));
        outputs = Json::parse(rstat_result_json(r.p));
    } else if (cmd_predict->parsed() || cmd_interp->parsed()) {
        DensityHandle f, g;
        load_density(density_path, f, inputs);
        if (!noise_path.empty()) load_density(noise_path, g, inputs);
        CoeffsHandle a;
        load_coeffs(coeffs_path, trunc, a, inputs);
        ResultHandle r;
        if (cmd_predict->parsed())
            check(rstat_predict(f.p, g.p, a.p, grid, trunc, &r.p));
        else
            check(rstat_interpolate(f.p, g.p, a.p, grid, trunc, &r.p));
        outputs = Json::parse(rstat_result_json(r.p));
    } else if (cmd_game->parsed()) {
        CoeffsHandle a;
        load_coeffs(coeffs_path, trunc, a, inputs);
        ResultHandle r;
        check(rstat_game(a.p, power, 0, &r.p));
        outputs = Json::parse(rstat_result_json(r.p));
    } else if (cmd_minimax->parsed()) {
        const std::string coeffs_bytes = read_file(coeffs_path);
        const std::string params_bytes = read_file(params_path);
        inputs[coeffs_path] = digest(coeffs_bytes);
        inputs[params_path] = digest(params_bytes);

        Json req;
        req["problem"] = problem;
        req["noisy"] = noisy;
        req["coeffs"] = Json::parse(coeffs_bytes);
        req["grid"] = grid;
        req["trunc"] = trunc;
        req["seed"] = seed;
        req["probes"] = probes;
        req["amplitude"] = amplitude;
        req["threads"] = threads;

        Json params = Json::parse(params_bytes);
        if (noisy) {
            // params either carries explicit {"f": {...}, "g": {...}} blocks or
            // flat fields shared by both class tags
            Json fceil = params.contains("f") ? params.at("f") : params;
            Json gceil = params.contains("g") ? params.at("g") : params;
            if (!fceil.contains("class")) fceil["class"] = fclass;
            if (!gceil.contains("class")) gceil["class"] = gclass.empty() ? fclass : gclass;
            if (!pin_f_path.empty()) {
                const std::string pin_bytes = read_file(pin_f_path);
                inputs[pin_f_path] = digest(pin_bytes);
                fceil = Json{{"class", "pinned"}, {"center", Json::parse(pin_bytes)}};
            }
            req["f_class"] = fceil;
            req["g_class"] = gceil;
        } else {
            Json fceil = params.contains("f") ? params.at("f") : params;
            if (!fceil.contains("class")) fceil["class"] = fclass;
            req["f_class"] = fceil;
        }

        ResultHandle r;
        check(rstat_minimax(req.dump().c_str(), &r.p));
        outputs = Json::parse(rstat_result_json(r.p));

        if (!emit_density_path.empty()) {
            std::vector<std::vector<double>> cols;
            cols.push_back(json_number_array(outputs.at("lf_density").at("values")));
            if (outputs.contains("lf_noise"))
                cols.push_back(json_number_array(outputs.at("lf_noise").at("values")));
            write_csv_series(emit_density_path, grid, cols);
        }
        if (!emit_char_path.empty()) {
            DensityHandle hgrid;  // characteristic on the grid via its band
            const Json& h = outputs.at("h");
            const int min_index = h.at("min_index").get<int>();
            std::vector<std::vector<double>> cols(2, std::vector<double>(grid, 0.0));
            const double pi = 3.14159265358979323846;
            std::size_t idx = 0;
            for (const Json& cj : h.at("h")) {
                const double re = cj[0].get<double>();
                const double im = cj[1].get<double>();
                const int j = min_index + static_cast<int>(idx++);
                for (uint32_t m = 0; m < grid; ++m) {
                    const double lambda = -pi + 2.0 * pi * m / grid;
                    cols[0][m] += re * std::cos(j * lambda) - im * std::sin(j * lambda);
                    cols[1][m] += re * std::sin(j * lambda) + im * std::cos(j * lambda);
                }
            }
            write_csv_series(emit_char_path, grid, cols);
        }
    } else if (cmd_sim->parsed()) {
        Json req;
        const std::string density_bytes = read_file(density_path);
        inputs[density_path] = digest(density_bytes);
        req["density"] = Json::parse(density_bytes);
        if (!noise_path.empty()) {
            const std::string noise_bytes = read_file(noise_path);
            inputs[noise_path] = digest(noise_bytes);
            req["noise"] = Json::parse(noise_bytes);
        }
        const std::string coeffs_bytes = read_file(coeffs_path);
        inputs[coeffs_path] = digest(coeffs_bytes);
        req["coeffs"] = Json::parse(coeffs_bytes);
        const std::string plan_bytes = read_file(plan_path);
        inputs[plan_path] = digest(plan_bytes);
        req["plan"] = Json::parse(plan_bytes);
        req["n"] = length;
        req["reps"] = reps;
        req["seed"] = seed;
        req["burn_in"] = burn_in;
        req["estimator_truncation"] = est_trunc;
        req["threads"] = threads;
        ResultHandle r;
        check(rstat_simulate(req.dump().c_str(), &r.p));
        outputs = Json::parse(rstat_result_json(r.p));
    } else if (cmd_saddle->parsed()) {
        Json req;
        const std::string sol_bytes = read_file(plan_path);
        inputs[plan_path] = digest(sol_bytes);
        req["solution"] = Json::parse(sol_bytes);
        const std::string coeffs_bytes = read_file(coeffs_path);
        inputs[coeffs_path] = digest(coeffs_bytes);
        req["coeffs"] = Json::parse(coeffs_bytes);
        const std::string params_bytes = read_file(params_path);
        inputs[params_path] = digest(params_bytes);
        Json params = Json::parse(params_bytes);
        req["f_class"] = params.contains("f") ? params.at("f") : params;
        if (params.contains("g")) req["g_class"] = params.at("g");
        req["probes"] = probes;
        req["seed"] = seed;
        req["amplitude"] = amplitude;
        req["grid"] = grid;
        req["threads"] = threads;
        ResultHandle r;
        check(rstat_verify_saddle(req.dump().c_str(), &r.p));
        outputs = Json::parse(rstat_result_json(r.p));
    }

    emit_result(wrap_report(command, inputs, outputs), out_path);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "completed in " << ms << " ms\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.reason << "\n";
        return e.code;
    } catch (const Json::exception& e) {
        std::cerr << "error: invalid JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
