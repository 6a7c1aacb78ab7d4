#ifndef RSTAT_RNG_HPP
#define RSTAT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rstat {

/// splitmix64 step; the seed-splitting rule used everywhere randomness is
/// derived (replication streams, probe draws): child = splitmix of
/// (base xor golden-ratio-weighted index xor stream tag).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, std::uint64_t tag) {
    return splitmix64(base ^ (index * 0x9E3779B97F4A7C15ull) ^ tag);
}

/// Small deterministic generator (xorshift-star family) independent of any
/// standard-library distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0xD1B54A32D192ED03ull)) {
        if (state_ == 0) state_ = 0x9E3779B97F4A7C15ull;
    }

    std::uint64_t next_u64() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1Dull;
    }

    /// Uniform on [0,1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on [-1,1).
    double symmetric() { return 2.0 * uniform() - 1.0; }

    /// Standard Gaussian via Box-Muller on explicit uniforms.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double c = std::cos(2.0 * 3.14159265358979323846 * u2);
        const double s = std::sin(2.0 * 3.14159265358979323846 * u2);
        spare_ = r * s;
        have_spare_ = true;
        return r * c;
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rstat

#endif
