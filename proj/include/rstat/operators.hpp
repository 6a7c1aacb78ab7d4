#ifndef RSTAT_OPERATORS_HPP
#define RSTAT_OPERATORS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rstat/fft.hpp"
#include "rstat/grid.hpp"

namespace rstat {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Dense Hermitian matrix with a validated symmetry invariant.
class HermitianMatrix {
public:
    explicit HermitianMatrix(CMatrix m);

    Eigen::Index order() const noexcept { return m_.rows(); }
    const CMatrix& matrix() const noexcept { return m_; }

private:
    CMatrix m_;
};

/// Hankel matrix of order n over a coefficient sequence: entry(p,q) = a(p+q)
/// for p+q <= n-1 and zero beyond (missing coefficients count as zero).
class HankelMatrix {
public:
    HankelMatrix(std::vector<Complex> generating, Eigen::Index order);

    Eigen::Index order() const noexcept { return n_; }
    Complex entry(Eigen::Index p, Eigen::Index q) const;
    CMatrix dense() const;
    const std::vector<Complex>& generating() const noexcept { return a_; }

private:
    std::vector<Complex> a_;
    Eigen::Index n_;
};

/// The estimation-game matrix of order n:
///   entry(p,q) = sum_u a(p+u) conj(a(q+u)),  u <= n-1-max(p,q),
/// i.e. the Hankel product A A^* restricted to the first n coefficients.
HermitianMatrix build_game_matrix(const std::vector<Complex>& a, Eigen::Index n);

/// Toeplitz matrix entry(j,k) = r_{j-k} from a Hermitian coefficient sequence.
HermitianMatrix build_toeplitz(const HermitianSequence& r, Eigen::Index n);

struct EigenPair {
    double value = 0.0;
    CVector vector;
};

/// Largest eigenvalue and a unit eigenvector with the first nonzero component
/// rotated to the positive real axis. Uses a full Hermitian decomposition up
/// to order 1024 and a deterministic shifted power iteration beyond.
EigenPair top_eigenpair(const HermitianMatrix& m);

/// Hermitian positive definite solve with a reciprocal-condition guard and
/// iterative refinement; the returned residual satisfies
/// ||m x - rhs|| <= 1e-10 ||rhs||.
CVector solve_hpd(const HermitianMatrix& m, const CVector& rhs);

/// Levinson recursion for Hermitian positive definite Toeplitz systems; a fast
/// path that must agree with solve_hpd.
CVector solve_toeplitz_levinson(const HermitianSequence& r, const CVector& rhs);

}  // namespace rstat

#endif
