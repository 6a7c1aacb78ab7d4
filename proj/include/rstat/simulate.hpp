#ifndef RSTAT_SIMULATE_HPP
#define RSTAT_SIMULATE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rstat/coeffs.hpp"
#include "rstat/plan.hpp"
#include "rstat/spectra.hpp"

namespace rstat {

struct SimConfig {
    std::uint32_t n = 4096;       // usable series length
    std::uint32_t reps = 10000;   // Monte Carlo replications
    std::uint64_t seed = 1;
    std::uint32_t burn_in = 128;  // discarded warmup; must be >= 2 * factorization truncation
    std::uint32_t estimator_truncation = 64;
    int threads = 1;
};

struct MCReport {
    double empirical_delta = 0.0;
    double stderr_mean = 0.0;
    double theoretical_delta = 0.0;
    double z_score = 0.0;
    std::uint32_t reps = 0;
    double generator_tail_energy = 0.0;   // sum_{k > L} |d(k)|^2 bound surrogate
    double estimator_tail_energy = 0.0;   // energy of h beyond the estimator truncation
};

/// A stretch of a realisation indexed from `first_index`.
struct IndexedSeries {
    int first_index = 0;
    std::vector<Complex> values;
    Complex at(int j) const {
        const int off = j - first_index;
        return off >= 0 && off < static_cast<int>(values.size())
                   ? values[static_cast<std::size_t>(off)]
                   : Complex(0.0, 0.0);
    }
    bool covers(int j) const {
        return j >= first_index && j < first_index + static_cast<int>(values.size());
    }
};

/// Stationary series xi(j) = sum_{k=0..L} d(k) eps(j-k) with unit-variance
/// innovations from the seeded generator: real Gaussian when the coefficients
/// are real, circular complex Gaussian otherwise. Indices 0..n-1 returned;
/// the configured burn-in is generated and discarded first.
std::vector<Complex> gen_sequence(const Factorization& fact, const SimConfig& cfg);

/// Internal variant exposing the index range; used by the Monte Carlo loop.
IndexedSeries gen_path(const Factorization& fact, std::uint64_t seed, int first_index,
                       int last_index, std::uint32_t burn_in);

/// Time-domain application of an estimate: sum over the plan's support of
/// h(j) * observed(j), restricted to |j| <= truncation. The skipped tail
/// energy is reported when requested.
Complex apply_estimator(const IndexedSeries& observed, const EstimatePlan& plan,
                        std::uint32_t truncation, double* tail_energy = nullptr);

/// Monte Carlo validation of a theoretical mean-square error: per replication
/// generate the signal (and noise), apply the estimate to the observation set
/// and compare |A xi - hat A xi|^2 against plan.delta.
MCReport mc_mse(const SpectralDensity& f, const SpectralDensity* g, const CoefSeq& a,
                const EstimatePlan& plan, const SimConfig& cfg);

}  // namespace rstat

#endif
