#include "rstat/coeffs.hpp"

#include <cmath>

#include "rstat/errors.hpp"
#include "rstat/fft.hpp"

namespace rstat {

CoefSeq CoefSeq::finite(std::vector<Complex> coeffs) {
    if (coeffs.empty()) throw InvalidInputError("functional needs at least one coefficient");
    CoefSeq c;
    c.coeffs_ = std::move(coeffs);
    return c;
}

CoefSeq CoefSeq::geometric(Complex scale, Complex ratio, std::uint32_t truncation) {
    if (!(std::abs(ratio) < 1.0))
        throw InvalidInputError("geometric functional requires |ratio| < 1");
    if (truncation == 0) throw InvalidInputError("truncation must be positive");
    CoefSeq c;
    c.ratio_ = ratio;
    c.scale_ = scale;
    c.coeffs_.resize(truncation);
    Complex cur = scale;
    for (std::uint32_t j = 0; j < truncation; ++j) {
        c.coeffs_[j] = cur;
        cur *= ratio;
    }
    return c;
}

bool CoefSeq::is_real() const {
    for (const Complex& v : coeffs_)
        if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real()))) return false;
    return true;
}

namespace {

// sum_{j >= m} (j+1) q^j = q^m (m + 1 - m q) / (1 - q)^2 for 0 <= q < 1.
double weighted_geom_tail(double q, std::uint32_t m) {
    const double num = std::pow(q, static_cast<double>(m)) *
                       (static_cast<double>(m) + 1.0 - static_cast<double>(m) * q);
    return num / ((1.0 - q) * (1.0 - q));
}

}  // namespace

double CoefSeq::tail_weighted_energy() const {
    if (!ratio_) return 0.0;
    const double q = std::norm(*ratio_);
    return std::norm(scale_) * weighted_geom_tail(q, size());
}

double CoefSeq::total_weighted_energy() const {
    if (ratio_) return std::norm(scale_) * weighted_geom_tail(std::norm(*ratio_), 0);
    double acc = 0.0;
    for (std::uint32_t j = 0; j < size(); ++j)
        acc += (static_cast<double>(j) + 1.0) * std::norm(coeffs_[j]);
    return acc;
}

std::uint32_t CoefSeq::required_truncation(double rel_tol) const {
    if (!ratio_) return size();
    const double q = std::norm(*ratio_);
    const double total = weighted_geom_tail(q, 0);
    std::uint32_t n = 1;
    while (weighted_geom_tail(q, n) > rel_tol * total) {
        if (n > (1u << 24))
            throw NumericError("functional tail decays too slowly for a finite truncation");
        n *= 2;
    }
    // tighten by binary search within [n/2, n]
    std::uint32_t lo = n / 2, hi = n;
    while (lo + 1 < hi) {
        const std::uint32_t mid = lo + (hi - lo) / 2;
        if (weighted_geom_tail(q, mid) > rel_tol * total)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

std::vector<Complex> CoefSeq::eval_symbol(const Grid& grid) const {
    if (coeffs_.size() >= grid.size())
        throw InvalidInputError("functional truncation exceeds grid resolution");
    return grid_eval_band(grid, coeffs_, 0);
}

}  // namespace rstat
