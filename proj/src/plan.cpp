#include "rstat/plan.hpp"

#include <algorithm>
#include <cmath>

#include "rstat/errors.hpp"

namespace rstat {

const char* problem_tag_name(ProblemTag t) {
    switch (t) {
        case ProblemTag::extrapolation: return "extrapolation";
        case ProblemTag::extrapolation_noisy: return "extrapolation_noisy";
        case ProblemTag::interpolation: return "interpolation";
        case ProblemTag::interpolation_noisy: return "interpolation_noisy";
    }
    return "unknown";
}

ProblemTag problem_tag_from_name(const std::string& name) {
    if (name == "extrapolation") return ProblemTag::extrapolation;
    if (name == "extrapolation_noisy") return ProblemTag::extrapolation_noisy;
    if (name == "interpolation") return ProblemTag::interpolation;
    if (name == "interpolation_noisy") return ProblemTag::interpolation_noisy;
    throw InvalidInputError("unknown problem tag: " + name);
}

bool EstimatePlan::index_admissible(int j) const {
    switch (problem) {
        case ProblemTag::extrapolation:
        case ProblemTag::extrapolation_noisy:
            return j < 0;
        case ProblemTag::interpolation:
        case ProblemTag::interpolation_noisy:
            return j < 0 || j > missing_upper;
    }
    return false;
}

Complex EstimatePlan::at(int j) const {
    if (j < min_index) return Complex(0.0, 0.0);
    const std::size_t i = static_cast<std::size_t>(j - min_index);
    return i < h.size() ? h[i] : Complex(0.0, 0.0);
}

double EstimatePlan::max_abs() const {
    double mx = 0.0;
    for (const Complex& v : h) mx = std::max(mx, std::abs(v));
    return mx;
}

std::vector<Complex> EstimatePlan::eval(const Grid& grid) const {
    if (h.empty()) return std::vector<Complex>(grid.size(), Complex(0.0, 0.0));
    return grid_eval_band(grid, h, min_index);
}

EstimatePlan plan_from_samples(ProblemTag problem, int missing_upper, const Grid& grid,
                               const std::vector<Complex>& h_samples, std::uint32_t band,
                               double delta) {
    if (2 * band >= grid.size())
        throw InvalidInputError("characteristic band exceeds grid resolution");
    EstimatePlan plan;
    plan.problem = problem;
    plan.missing_upper = missing_upper;
    plan.delta = delta;

    std::vector<Complex> two = grid_fourier_coeffs_twosided(grid, h_samples, band);
    const int lo = -static_cast<int>(band);

    // roundoff floor: transform noise of an (essentially) zero characteristic
    // must not register as support leakage
    const double tiny = 1e-13 * std::max(1.0, std::sqrt(std::abs(delta)));
    for (Complex& v : two)
        if (std::abs(v) < tiny) v = Complex(0.0, 0.0);

    double max_abs = 0.0;
    for (const Complex& v : two) max_abs = std::max(max_abs, std::abs(v));

    double leak = 0.0;
    plan.min_index = lo;
    plan.h.assign(two.size(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < two.size(); ++i) {
        const int j = lo + static_cast<int>(i);
        if (plan.index_admissible(j)) {
            plan.h[i] = two[i];
        } else {
            leak = std::max(leak, std::abs(two[i]));
        }
    }
    plan.support_leakage = max_abs > 0.0 ? leak / max_abs : 0.0;

    // trim zero margins so plans stay compact
    std::size_t first = 0, last = plan.h.size();
    while (first < last && std::abs(plan.h[first]) == 0.0) ++first;
    while (last > first && std::abs(plan.h[last - 1]) == 0.0) --last;
    if (first == last) {
        plan.min_index = 0;
        plan.h.clear();
    } else {
        plan.min_index = lo + static_cast<int>(first);
        plan.h.assign(plan.h.begin() + static_cast<std::ptrdiff_t>(first),
                      plan.h.begin() + static_cast<std::ptrdiff_t>(last));
    }
    return plan;
}

double mse_quadrature(const Grid& grid, const CoefSeq& a, const EstimatePlan& plan,
                      const std::vector<double>& f_samples,
                      const std::vector<double>* g_samples) {
    const std::vector<Complex> asym = a.eval_symbol(grid);
    const std::vector<Complex> hsym = plan.eval(grid);
    double acc = 0.0;
    for (std::uint32_t m = 0; m < grid.size(); ++m) {
        acc += std::norm(asym[m] - hsym[m]) * f_samples[m];
        if (g_samples) acc += std::norm(hsym[m]) * (*g_samples)[m];
    }
    return acc / static_cast<double>(grid.size());
}

}  // namespace rstat
