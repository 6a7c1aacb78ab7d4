#ifndef RSTAT_PLAN_HPP
#define RSTAT_PLAN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rstat/coeffs.hpp"
#include "rstat/spectra.hpp"

namespace rstat {

enum class ProblemTag { extrapolation, extrapolation_noisy, interpolation, interpolation_noisy };

const char* problem_tag_name(ProblemTag t);
ProblemTag problem_tag_from_name(const std::string& name);

/// Fourier description of a linear estimate: the spectral characteristic
/// h(e^{i lambda}) = sum_j h(j) e^{ij lambda} stored on a contiguous index
/// band, together with the theoretical mean-square error. The admissible
/// support encodes which observations the estimate may use: extrapolation
/// estimates live on negative indices, interpolation estimates on indices
/// outside the missing block {0..N}.
struct EstimatePlan {
    ProblemTag problem = ProblemTag::extrapolation;
    int missing_upper = 0;  // N of the missing block (interpolation problems)
    int min_index = 0;
    std::vector<Complex> h;
    double delta = 0.0;
    double support_leakage = 0.0;  // max out-of-support |h(j)| / max |h(j)| before projection

    bool index_admissible(int j) const;
    Complex at(int j) const;
    int max_index() const { return min_index + static_cast<int>(h.size()) - 1; }
    double max_abs() const;

    std::vector<Complex> eval(const Grid& grid) const;
};

/// Re-expand grid samples of a characteristic into a plan on the admissible
/// band, recording (and zeroing) any out-of-support leakage.
EstimatePlan plan_from_samples(ProblemTag problem, int missing_upper, const Grid& grid,
                               const std::vector<Complex>& h_samples, std::uint32_t band,
                               double delta);

/// Mean-square error of an arbitrary characteristic h under densities f (and
/// optional noise g) by grid quadrature:
///   (1/2pi) int |A - h|^2 f  (+ (1/2pi) int |h|^2 g).
double mse_quadrature(const Grid& grid, const CoefSeq& a, const EstimatePlan& plan,
                      const std::vector<double>& f_samples,
                      const std::vector<double>* g_samples = nullptr);

}  // namespace rstat

#endif
