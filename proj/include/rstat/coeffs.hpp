#ifndef RSTAT_COEFFS_HPP
#define RSTAT_COEFFS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rstat/grid.hpp"

namespace rstat {

/// Coefficients a(j) of the target functional sum_j a(j) xi(j). Either an
/// explicit finite vector, or a geometric tail rule a(j) = scale * ratio^j
/// materialised at a truncation point with closed-form summability
/// certificates sum |a(j)| and sum (j+1)|a(j)|^2.
class CoefSeq {
public:
    static CoefSeq finite(std::vector<Complex> coeffs);
    /// |ratio| < 1 required.
    static CoefSeq geometric(Complex scale, Complex ratio, std::uint32_t truncation);

    bool is_finite() const noexcept { return !ratio_.has_value(); }
    std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(coeffs_.size()); }
    const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
    Complex at(std::uint32_t j) const {
        return j < coeffs_.size() ? coeffs_[j] : Complex(0.0, 0.0);
    }
    bool is_real() const;

    /// Tail of the weighted-energy certificate beyond the truncation:
    /// sum_{j >= size} (j+1) |a(j)|^2 (zero for finite functionals).
    double tail_weighted_energy() const;
    /// Full sum_{j>=0} (j+1)|a(j)|^2 including the analytic tail.
    double total_weighted_energy() const;

    /// Smallest truncation with tail < rel_tol * total; refuses impossible
    /// requests. Finite functionals return their own length.
    std::uint32_t required_truncation(double rel_tol) const;

    /// A(e^{i lambda}) = sum_j a(j) e^{ij lambda} sampled on the grid.
    std::vector<Complex> eval_symbol(const Grid& grid) const;

private:
    CoefSeq() = default;
    std::vector<Complex> coeffs_;
    std::optional<Complex> ratio_;  // set for the geometric rule
    Complex scale_{0.0, 0.0};
};

/// Relative tail tolerance accepted for infinite functionals.
inline constexpr double kTailCertificateRel = 1e-10;

}  // namespace rstat

#endif
