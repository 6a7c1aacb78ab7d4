#include "rstat/operators.hpp"

#include <cmath>

#include "rstat/errors.hpp"

namespace rstat {

namespace {

constexpr Eigen::Index kDenseEigenLimit = 1024;
constexpr double kHermitianTol = 1e-12;
constexpr double kEigenResidualRel = 1e-10;
constexpr double kSolveResidualRel = 1e-10;
constexpr double kConditionFloor = 1e-12;

void fix_phase(CVector& v) {
    const double scale = v.norm();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12 * scale) {
            const Complex rot = std::conj(v[i]) / std::abs(v[i]);
            v *= rot;
            // kill the numerically-zero imaginary part of the anchor entry
            v[i] = Complex(std::abs(v[i]), 0.0);
            return;
        }
    }
}

}  // namespace

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidInputError("Hermitian matrix must be square");
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > kHermitianTol * scale)
        throw InvalidInputError("matrix violates the Hermitian invariant");
    // symmetrise the roundoff away so downstream solvers see an exact adjoint
    m_ = 0.5 * (m_ + m_.adjoint().eval());
}

HankelMatrix::HankelMatrix(std::vector<Complex> generating, Eigen::Index order)
    : a_(std::move(generating)), n_(order) {
    if (n_ <= 0) throw InvalidInputError("Hankel order must be positive");
}

Complex HankelMatrix::entry(Eigen::Index p, Eigen::Index q) const {
    const Eigen::Index s = p + q;
    if (s > n_ - 1 || s >= static_cast<Eigen::Index>(a_.size())) return Complex(0.0, 0.0);
    return a_[static_cast<std::size_t>(s)];
}

CMatrix HankelMatrix::dense() const {
    CMatrix m(n_, n_);
    for (Eigen::Index p = 0; p < n_; ++p)
        for (Eigen::Index q = 0; q < n_; ++q) m(p, q) = entry(p, q);
    return m;
}

HermitianMatrix build_game_matrix(const std::vector<Complex>& a, Eigen::Index n) {
    if (n <= 0) throw InvalidInputError("game matrix order must be positive");
    CMatrix m = CMatrix::Zero(n, n);
    const Eigen::Index len = static_cast<Eigen::Index>(a.size());
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = p; q < n; ++q) {
            Complex acc(0.0, 0.0);
            const Eigen::Index cap = n - 1 - q;  // q >= p
            for (Eigen::Index u = 0; u <= cap; ++u) {
                if (p + u >= len || q + u >= len) break;
                acc += a[static_cast<std::size_t>(p + u)] *
                       std::conj(a[static_cast<std::size_t>(q + u)]);
            }
            m(p, q) = acc;
            m(q, p) = std::conj(acc);
        }
    }
    return HermitianMatrix(std::move(m));
}

HermitianMatrix build_toeplitz(const HermitianSequence& r, Eigen::Index n) {
    if (n <= 0) throw InvalidInputError("Toeplitz order must be positive");
    CMatrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) m(j, k) = r.at(static_cast<int>(j - k));
    return HermitianMatrix(std::move(m));
}

EigenPair top_eigenpair(const HermitianMatrix& h) {
    const CMatrix& m = h.matrix();
    const Eigen::Index n = m.rows();
    const double mnorm = m.norm();

    EigenPair out;
    if (n <= kDenseEigenLimit) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
        if (es.info() != Eigen::Success)
            throw NumericError("Hermitian eigendecomposition failed to converge");
        out.value = es.eigenvalues()(n - 1);
        out.vector = es.eigenvectors().col(n - 1);
        // Degenerate top eigenspace: canonicalise by projecting the earliest
        // coordinate vector with a nonnegligible footprint onto the eigenspace,
        // so ties resolve to e_0 (then e_1, ...) deterministically.
        Eigen::Index lo = n - 1;
        while (lo > 0 && out.value - es.eigenvalues()(lo - 1) <= 1e-12 * std::max(mnorm, 1.0))
            --lo;
        if (lo < n - 1) {
            const auto space = es.eigenvectors().rightCols(n - lo);
            for (Eigen::Index basis = 0; basis < n; ++basis) {
                CVector proj = space * space.adjoint().col(basis);
                if (proj.norm() > 1e-6) {
                    out.vector = proj / proj.norm();
                    break;
                }
            }
        }
    } else {
        // Deterministic shifted power iteration: the shift makes the target
        // eigenvalue the one of largest magnitude even for indefinite input.
        const double shift = m.cwiseAbs().rowwise().sum().maxCoeff();
        CVector v = CVector::Ones(n) / std::sqrt(static_cast<double>(n));
        double lambda = 0.0;
        const int cap = 20000;
        int it = 0;
        for (; it < cap; ++it) {
            CVector w = m * v + shift * v;
            const double wn = w.norm();
            if (wn == 0.0) throw NumericError("power iteration collapsed to zero");
            w /= wn;
            lambda = (w.adjoint() * (m * w))(0).real();
            if ((m * w - lambda * w).norm() <= kEigenResidualRel * mnorm) {
                v = w;
                break;
            }
            v = w;
        }
        if (it == cap) {
            const double res = (m * v - lambda * v).norm();
            throw NumericError("power iteration did not converge; residual " +
                               std::to_string(res));
        }
        out.value = lambda;
        out.vector = v;
    }
    fix_phase(out.vector);
    out.vector.normalize();
    const double res = (m * out.vector - out.value * out.vector).norm();
    if (res > kEigenResidualRel * std::max(mnorm, 1e-300))
        throw NumericError("eigenpair residual " + std::to_string(res) + " exceeds tolerance");
    return out;
}

CVector solve_hpd(const HermitianMatrix& h, const CVector& rhs) {
    const CMatrix& m = h.matrix();
    if (rhs.size() != m.rows()) throw InvalidInputError("right-hand side size mismatch");

    Eigen::LDLT<CMatrix> ldlt(m);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw NumericError("matrix is not positive definite");
    const double rcond = ldlt.rcond();
    if (rcond < kConditionFloor)
        throw NumericError("matrix is numerically singular: rcond " + std::to_string(rcond));

    CVector x = ldlt.solve(rhs);
    // two refinement sweeps keep the residual near machine precision
    for (int sweep = 0; sweep < 2; ++sweep) x += ldlt.solve(rhs - m * x);

    const double rn = rhs.norm();
    const double res = (m * x - rhs).norm();
    if (rn > 0.0 && res > kSolveResidualRel * rn)
        throw NumericError("linear solve residual " + std::to_string(res / rn) +
                           " exceeds tolerance; rcond " + std::to_string(rcond));
    return x;
}

CVector solve_toeplitz_levinson(const HermitianSequence& r, const CVector& rhs) {
    const Eigen::Index n = rhs.size();
    if (n <= 0) throw InvalidInputError("empty right-hand side");
    const Complex r0 = r.at(0);
    if (!(r0.real() > 0.0) || std::abs(r0.imag()) > 1e-12 * std::abs(r0))
        throw NumericError("Toeplitz system is not positive definite");

    // Hermitian Levinson-Durbin: forward vectors f_k solve T_k f = e_0.
    CVector f = CVector::Zero(n), b = CVector::Zero(n), x = CVector::Zero(n);
    f(0) = Complex(1.0, 0.0) / r0;
    b(0) = f(0);
    x(0) = rhs(0) / r0;
    for (Eigen::Index k = 1; k < n; ++k) {
        Complex ef(0.0, 0.0), eb(0.0, 0.0), ex(0.0, 0.0);
        for (Eigen::Index j = 0; j < k; ++j) {
            ef += r.at(static_cast<int>(k - j)) * f(j);
            eb += r.at(static_cast<int>(-1 - j)) * b(j);
            ex += r.at(static_cast<int>(k - j)) * x(j);
        }
        const Complex den = Complex(1.0, 0.0) - ef * eb;
        if (std::abs(den) < 1e-300)
            throw NumericError("Levinson recursion broke down: reflection pivot vanished");
        CVector fn = CVector::Zero(n), bn = CVector::Zero(n);
        for (Eigen::Index j = 0; j <= k; ++j) {
            const Complex fj = j < k ? f(j) : Complex(0.0, 0.0);
            const Complex bj = j > 0 ? b(j - 1) : Complex(0.0, 0.0);
            fn(j) = (fj - ef * bj) / den;
            bn(j) = (bj - eb * fj) / den;
        }
        f = fn;
        b = bn;
        const Complex err = rhs(k) - ex;
        for (Eigen::Index j = 0; j <= k; ++j) x(j) += err * b(j);
    }
    return x;
}

}  // namespace rstat
