#include "rstat/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "rstat/errors.hpp"
#include "rstat/rng.hpp"

namespace rstat {

namespace {

constexpr std::uint64_t kSignalTag = 0x5147A11Cull;
constexpr std::uint64_t kNoiseTag = 0x4E0153ull;

bool coeffs_real(const std::vector<Complex>& d) {
    for (const Complex& v : d)
        if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real()))) return false;
    return true;
}

void validate(const Factorization& fact, const SimConfig& cfg) {
    const std::uint32_t l = fact.truncation();
    if (cfg.burn_in < 2 * l)
        throw InvalidInputError("burn-in must be at least twice the factorization truncation");
    if (cfg.n <= cfg.burn_in)
        throw InvalidInputError("series length must exceed the burn-in");
    if (cfg.reps < 1) throw InvalidInputError("at least one replication is required");
}

}  // namespace

IndexedSeries gen_path(const Factorization& fact, std::uint64_t seed, int first_index,
                       int last_index, std::uint32_t burn_in) {
    if (last_index < first_index) throw InvalidInputError("empty generation range");
    const int l = static_cast<int>(fact.truncation());
    const bool real_d = coeffs_real(fact.d);
    Rng rng(seed);

    // innovations over [first_index - burn_in - L, last_index]
    const int eps_first = first_index - static_cast<int>(burn_in) - l;
    const int eps_count = last_index - eps_first + 1;
    std::vector<Complex> eps(static_cast<std::size_t>(eps_count));
    for (int i = 0; i < eps_count; ++i) {
        if (real_d) {
            eps[static_cast<std::size_t>(i)] = Complex(rng.gaussian(), 0.0);
        } else {
            const double re = rng.gaussian();
            const double im = rng.gaussian();
            eps[static_cast<std::size_t>(i)] = Complex(re, im) * (1.0 / std::sqrt(2.0));
        }
    }

    IndexedSeries out;
    out.first_index = first_index;
    const int count = last_index - first_index + 1;
    out.values.assign(static_cast<std::size_t>(count), Complex(0.0, 0.0));
    for (int j = 0; j < count; ++j) {
        const int abs_index = first_index + j;
        Complex acc(0.0, 0.0);
        for (int k = 0; k <= l; ++k) {
            const int e = abs_index - k - eps_first;
            acc += fact.d[static_cast<std::size_t>(k)] * eps[static_cast<std::size_t>(e)];
        }
        out.values[static_cast<std::size_t>(j)] = acc;
    }
    return out;
}

std::vector<Complex> gen_sequence(const Factorization& fact, const SimConfig& cfg) {
    validate(fact, cfg);
    const IndexedSeries path =
        gen_path(fact, derive_seed(cfg.seed, 0, kSignalTag), 0,
                 static_cast<int>(cfg.n) - 1, cfg.burn_in);
    return path.values;
}

Complex apply_estimator(const IndexedSeries& observed, const EstimatePlan& plan,
                        std::uint32_t truncation, double* tail_energy) {
    Complex acc(0.0, 0.0);
    double tail = 0.0;
    for (std::size_t i = 0; i < plan.h.size(); ++i) {
        const int j = plan.min_index + static_cast<int>(i);
        const Complex& hj = plan.h[i];
        if (hj == Complex(0.0, 0.0)) continue;
        if (!plan.index_admissible(j))
            throw InvalidInputError("plan carries weight outside its admissible support");
        if (std::abs(j) > static_cast<int>(truncation)) {
            tail += std::norm(hj);
            continue;
        }
        if (!observed.covers(j))
            throw InvalidInputError("observation window does not cover estimator support");
        acc += hj * observed.at(j);
    }
    if (tail_energy) *tail_energy = tail;
    return acc;
}

MCReport mc_mse(const SpectralDensity& f, const SpectralDensity* g, const CoefSeq& a,
                const EstimatePlan& plan, const SimConfig& cfg) {
    const Grid grid(kDefaultGridSize);
    const std::uint32_t fact_trunc = std::max<std::uint32_t>(1, cfg.burn_in / 2);
    const Factorization ff = factorize(f, grid, fact_trunc);
    std::optional<Factorization> fg;
    if (g) {
        const std::vector<double> gs = g->eval(grid);
        double gmax = 0.0;
        for (double v : gs) gmax = std::max(gmax, v);
        if (gmax > 0.0) fg = factorize(*g, grid, fact_trunc);
    }
    validate(ff, cfg);

    const bool interp = plan.problem == ProblemTag::interpolation ||
                        plan.problem == ProblemTag::interpolation_noisy;
    const int t = static_cast<int>(cfg.estimator_truncation);
    const int n_target = static_cast<int>(a.size());
    const int lo = -t;
    const int hi = interp ? plan.missing_upper + t : n_target - 1;

    MCReport rep;
    rep.reps = cfg.reps;
    rep.theoretical_delta = plan.delta;
    rep.generator_tail_energy = 0.0;  // filled below from the factorization decay
    {
        // surrogate for the truncated tail: the last kept coefficient scaled
        // by a geometric continuation bound
        const Complex last = ff.d.back();
        rep.generator_tail_energy = std::norm(last) * static_cast<double>(ff.d.size());
    }

    std::vector<double> errs(cfg.reps, 0.0);
    const auto run_rep = [&](std::uint32_t r) {
        const IndexedSeries xi = gen_path(ff, derive_seed(cfg.seed, r, kSignalTag), lo, hi,
                                          cfg.burn_in);
        IndexedSeries observed = xi;
        if (fg) {
            const IndexedSeries eta = gen_path(*fg, derive_seed(cfg.seed, r, kNoiseTag), lo,
                                               hi, cfg.burn_in);
            for (std::size_t i = 0; i < observed.values.size(); ++i)
                observed.values[i] += eta.values[i];
        }
        Complex target(0.0, 0.0);
        for (int j = 0; j < n_target; ++j)
            target += a.at(static_cast<std::uint32_t>(j)) * xi.at(j);
        double tail = 0.0;
        const Complex est = apply_estimator(observed, plan, cfg.estimator_truncation, &tail);
        errs[r] = std::norm(target - est);
    };

    if (cfg.threads > 1) {
        std::vector<std::thread> pool;
        const std::uint32_t nt =
            std::min<std::uint32_t>(static_cast<std::uint32_t>(cfg.threads), cfg.reps);
        std::atomic<std::uint32_t> next{0};
        for (std::uint32_t tid = 0; tid < nt; ++tid)
            pool.emplace_back([&] {
                for (std::uint32_t r = next.fetch_add(1); r < cfg.reps; r = next.fetch_add(1))
                    run_rep(r);
            });
        for (auto& th : pool) th.join();
    } else {
        for (std::uint32_t r = 0; r < cfg.reps; ++r) run_rep(r);
    }

    // accumulate in replication order
    double mean = 0.0;
    for (std::uint32_t r = 0; r < cfg.reps; ++r) mean += errs[r];
    mean /= static_cast<double>(cfg.reps);
    double var = 0.0;
    for (std::uint32_t r = 0; r < cfg.reps; ++r) {
        const double d = errs[r] - mean;
        var += d * d;
    }
    var = cfg.reps > 1 ? var / static_cast<double>(cfg.reps - 1) : 0.0;

    rep.empirical_delta = mean;
    rep.stderr_mean = std::sqrt(var / static_cast<double>(cfg.reps));
    {
        double tail = 0.0;
        for (std::size_t i = 0; i < plan.h.size(); ++i) {
            const int j = plan.min_index + static_cast<int>(i);
            if (std::abs(j) > static_cast<int>(cfg.estimator_truncation))
                tail += std::norm(plan.h[i]);
        }
        rep.estimator_tail_energy = tail;
    }
    rep.z_score = rep.stderr_mean > 0.0
                      ? (rep.empirical_delta - rep.theoretical_delta) / rep.stderr_mean
                      : 0.0;
    return rep;
}

}  // namespace rstat
