#ifndef RSTAT_GRID_HPP
#define RSTAT_GRID_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "rstat/errors.hpp"

namespace rstat {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform quadrature grid lambda_m = -pi + 2*pi*m/M, m = 0..M-1.
/// M must be a power of two and at least 64 so every transform can ride the
/// radix-2 FFT and periodic-trapezoid quadrature stays spectrally accurate.
class Grid {
public:
    explicit Grid(std::uint32_t size) : size_(size) {
        if (size < 64 || (size & (size - 1)) != 0)
            throw InvalidInputError("grid size must be a power of two >= 64, got " +
                                    std::to_string(size));
    }

    std::uint32_t size() const noexcept { return size_; }

    double point(std::uint32_t m) const noexcept {
        return -kPi + 2.0 * kPi * static_cast<double>(m) / static_cast<double>(size_);
    }

    std::vector<double> points() const {
        std::vector<double> p(size_);
        for (std::uint32_t m = 0; m < size_; ++m) p[m] = point(m);
        return p;
    }

    /// (1/2pi) * integral over [-pi,pi) of tabulated samples.
    template <typename T>
    T mean(const std::vector<T>& samples) const {
        T acc{};
        for (const T& v : samples) acc += v;
        return acc / static_cast<double>(size_);
    }

private:
    std::uint32_t size_;
};

inline constexpr std::uint32_t kDefaultGridSize = 4096;
inline constexpr std::uint32_t kDefaultTruncation = 512;

}  // namespace rstat

#endif
