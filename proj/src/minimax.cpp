#include "rstat/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "rstat/errors.hpp"
#include "rstat/operators.hpp"
#include "rstat/rng.hpp"

namespace rstat {

const char* class_tag_name(DensityClassTag t) {
    switch (t) {
        case DensityClassTag::D0: return "D0";
        case DensityClassTag::DM: return "DM";
        case DensityClassTag::Dvu: return "Dvu";
        case DensityClassTag::Deps: return "Deps";
        case DensityClassTag::D1eps: return "D1eps";
        case DensityClassTag::D2eps: return "D2eps";
        case DensityClassTag::D0minus: return "D0minus";
        case DensityClassTag::DvuMinus: return "DvuMinus";
        case DensityClassTag::pinned: return "pinned";
    }
    return "unknown";
}

DensityClassTag class_tag_from_name(const std::string& name) {
    if (name == "D0") return DensityClassTag::D0;
    if (name == "DM") return DensityClassTag::DM;
    if (name == "Dvu") return DensityClassTag::Dvu;
    if (name == "Deps") return DensityClassTag::Deps;
    if (name == "D1eps") return DensityClassTag::D1eps;
    if (name == "D2eps") return DensityClassTag::D2eps;
    if (name == "D0minus") return DensityClassTag::D0minus;
    if (name == "DvuMinus") return DensityClassTag::DvuMinus;
    if (name == "pinned") return DensityClassTag::pinned;
    throw InvalidInputError("unknown density class: " + name);
}

namespace {

using Samples = std::vector<double>;

double sup_diff(const Samples& x, const Samples& y) {
    double mx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mx = std::max(mx, std::abs(x[i] - y[i]));
    return mx;
}

double grid_mean(const Samples& x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc / static_cast<double>(x.size());
}

/// Monotone scalar calibration: find s > 0 with target(s) = 0 where target is
/// nondecreasing in s. Brackets grow geometrically from s0.
double bisect_scale(const std::function<double(double)>& target, double s0, double tol,
                    const char* what) {
    double lo = s0, hi = s0;
    double flo = target(lo);
    double fhi = flo;
    for (int i = 0; i < 200 && flo > tol; ++i) {
        lo *= 0.5;
        flo = target(lo);
    }
    for (int i = 0; i < 200 && fhi < -tol; ++i) {
        hi *= 2.0;
        fhi = target(hi);
    }
    if (std::abs(flo) <= tol) return lo;
    if (std::abs(fhi) <= tol) return hi;
    if (flo > 0.0 || fhi < 0.0)
        throw ClassError(std::string("class constraint cannot be met while calibrating ") + what);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = target(mid);
        if (std::abs(fm) <= tol) return mid;
        (fm < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Samples eval_or_throw(const std::optional<SpectralDensity>& d, const Grid& grid,
                      const char* what) {
    if (!d) throw InvalidInputError(std::string("density class is missing its ") + what);
    return d->eval(grid);
}

// Classical extrapolation plan for a grid density with a relaxed factorization
// gate: least favourable densities of the clipped classes carry kinks, so the
// cepstral tail decays only polynomially; the residual is surfaced as a note
// instead of failing hard the way the public estimation op does.
EstimatePlan classical_extrap_plan(const Grid& grid, const CoefSeq& a, const Samples& f,
                                   std::vector<std::string>* notes) {
    const std::uint32_t trunc = grid.size() / 4 - 1;
    const Factorization fact =
        factorize_samples(grid, f, trunc, /*enforce_residual=*/false);
    if (notes && fact.residual > kFactorizationResidualLimit)
        notes->push_back("factorization of the least favourable density converged to residual " +
                         std::to_string(fact.residual));
    const std::vector<Complex> ad = apply_functional(a, fact.d, trunc + 1);
    double delta = 0.0;
    for (const Complex& v : ad) delta += std::norm(v);

    const std::vector<Complex> asym = a.eval_symbol(grid);
    const std::vector<Complex> phi = fact.eval_phi(grid);
    const std::vector<Complex> rsym = grid_eval_band(grid, ad, 0);
    double phimax = 0.0;
    for (const Complex& p : phi) phimax = std::max(phimax, std::norm(p));
    const double floor = kDensityFloorRel * phimax;
    std::vector<Complex> h(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m) {
        const double p2 = std::max(std::norm(phi[m]), floor);
        h[m] = asym[m] - std::conj(phi[m]) / p2 * rsym[m];
    }
    return plan_from_samples(ProblemTag::extrapolation, static_cast<int>(a.size()) - 1, grid,
                             h, grid.size() / 2 - 1, delta);
}

}  // namespace

double class_membership_violation(const Grid& grid, const Samples& f, const DensityClass& cls) {
    double viol = 0.0;
    for (double v : f) viol = std::max(viol, -v);  // nonnegativity
    switch (cls.tag) {
        case DensityClassTag::D0:
            viol = std::max(viol, grid_mean(f) - cls.power);
            break;
        case DensityClassTag::D0minus: {
            Samples inv(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) inv[i] = f[i] > 0.0 ? 1.0 / f[i] : 1e300;
            viol = std::max(viol, cls.power - grid_mean(inv));
            break;
        }
        case DensityClassTag::DM: {
            for (std::size_t m = 0; m < cls.moments.size(); ++m) {
                double acc = 0.0;
                for (std::size_t i = 0; i < f.size(); ++i) {
                    const double lambda = grid.point(static_cast<std::uint32_t>(i));
                    const double v = cls.inverse_moments
                                         ? (f[i] > 0.0 ? 1.0 / f[i] : 1e300)
                                         : f[i];
                    acc += v * std::cos(static_cast<double>(m) * lambda);
                }
                acc /= static_cast<double>(f.size());
                viol = std::max(viol, std::abs(acc - cls.moments[m]));
            }
            break;
        }
        case DensityClassTag::Dvu: {
            const Samples v = eval_or_throw(cls.lower, grid, "lower bound");
            const Samples u = eval_or_throw(cls.upper, grid, "upper bound");
            for (std::size_t i = 0; i < f.size(); ++i)
                viol = std::max({viol, v[i] - f[i], f[i] - u[i]});
            viol = std::max(viol, std::abs(grid_mean(f) - cls.power));
            break;
        }
        case DensityClassTag::Deps: {
            const Samples w = eval_or_throw(cls.center, grid, "known component");
            for (std::size_t i = 0; i < f.size(); ++i)
                viol = std::max(viol, (1.0 - cls.eps) * w[i] - f[i]);
            viol = std::max(viol, std::abs(grid_mean(f) - cls.power));
            break;
        }
        case DensityClassTag::D1eps: {
            const Samples v = eval_or_throw(cls.center, grid, "center");
            Samples d(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) d[i] = std::abs(f[i] - v[i]);
            viol = std::max(viol, grid_mean(d) - cls.eps);
            break;
        }
        case DensityClassTag::D2eps: {
            const Samples v = eval_or_throw(cls.center, grid, "center");
            Samples d(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) d[i] = (f[i] - v[i]) * (f[i] - v[i]);
            viol = std::max(viol, grid_mean(d) - cls.eps);
            break;
        }
        case DensityClassTag::DvuMinus: {
            const Samples v = eval_or_throw(cls.lower, grid, "lower bound");
            const Samples u = eval_or_throw(cls.upper, grid, "upper bound");
            for (std::size_t i = 0; i < f.size(); ++i)
                viol = std::max({viol, v[i] - f[i], f[i] - u[i]});
            Samples inv(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) inv[i] = f[i] > 0.0 ? 1.0 / f[i] : 1e300;
            viol = std::max(viol, std::abs(grid_mean(inv) - cls.power));
            break;
        }
        case DensityClassTag::pinned: {
            const Samples c = eval_or_throw(cls.center, grid, "pinned density");
            viol = std::max(viol, sup_diff(f, c));
            break;
        }
    }
    return viol;
}

// ---------------------------------------------------------------------------
// D0 extrapolation: con-eigenvalue problem A d = alpha conj(d)
// ---------------------------------------------------------------------------

namespace {

struct ConEigen {
    double alpha = 0.0;
    std::vector<Complex> d;
};

// Solutions of A d = alpha conj(d) for complex symmetric A through the real
// symmetric block form K = [[Re A, -Im A], [-Im A, -Re A]]: an eigenpair
// (sigma, [x;y]) of K yields d = x + i y with A d = sigma conj(d).
ConEigen dominant_con_eigen(const HankelMatrix& hank) {
    const Eigen::Index n = hank.order();
    const CMatrix a = hank.dense();
    Eigen::MatrixXd k(2 * n, 2 * n);
    k.topLeftCorner(n, n) = a.real();
    k.topRightCorner(n, n) = -a.imag();
    k.bottomLeftCorner(n, n) = -a.imag();
    k.bottomRightCorner(n, n) = -a.real();
    k = 0.5 * (k + k.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    if (es.info() != Eigen::Success)
        throw NumericError("con-eigenvalue decomposition failed to converge");
    const Eigen::Index top = 2 * n - 1;
    ConEigen out;
    out.alpha = es.eigenvalues()(top);
    if (out.alpha < 0.0)
        throw NumericError("con-eigenvalue problem produced no nonnegative solution");
    out.d.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        out.d[static_cast<std::size_t>(i)] =
            Complex(es.eigenvectors()(i, top), es.eigenvectors()(n + i, top));
    // pin the free sign: largest component real-positive
    std::size_t anchor = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < out.d.size(); ++i)
        if (std::abs(out.d[i]) > best) {
            best = std::abs(out.d[i]);
            anchor = i;
        }
    if (out.d[anchor].real() < 0.0)
        for (Complex& v : out.d) v = -v;
    return out;
}

}  // namespace

MinimaxSolution lf_extrap_D0(const CoefSeq& a, double p0, std::uint32_t order,
                             const MinimaxConfig& cfg) {
    if (!(p0 > 0.0)) throw InvalidInputError("power bound must be positive");
    if (order == 0) throw InvalidInputError("order must be positive");
    const Grid grid(cfg.grid_size);

    if (!a.is_finite()) {
        const std::uint32_t needed = a.required_truncation(kTailCertificateRel);
        if (a.size() < needed)
            throw NumericError("functional tail certificate failed: need truncation " +
                               std::to_string(needed));
    }

    const HankelMatrix hank(a.coeffs(), static_cast<Eigen::Index>(order));
    const ConEigen ce = dominant_con_eigen(hank);

    double nrm = 0.0;
    for (const Complex& v : ce.d) nrm += std::norm(v);
    if (!(nrm > 0.0)) throw NumericError("degenerate functional: zero con-eigenvector");
    const double scale = std::sqrt(p0 / nrm);

    MinimaxSolution sol;
    std::vector<Complex> d0(ce.d.size());
    for (std::size_t i = 0; i < ce.d.size(); ++i) d0[i] = scale * ce.d[i];
    sol.lf_density = SpectralDensity::rational(d0, {Complex(1.0, 0.0)});
    sol.game_value = ce.alpha * ce.alpha * p0;
    sol.h0 = classical_extrap_plan(grid, a, sol.lf_density.eval(grid), &sol.notes);
    sol.iterations = 1;

    if (std::abs(sol.h0.delta - sol.game_value) >
        1e-8 * std::max(1.0, std::abs(sol.game_value)))
        sol.notes.push_back(
            "classical error at the least favourable density differs from alpha^2 P0 by " +
            std::to_string(sol.h0.delta - sol.game_value) +
            " (con-eigenvector may not be minimum phase)");

    DensityClass cls = DensityClass::power_bound(p0);
    sol.residuals.constraint =
        class_membership_violation(grid, sol.lf_density.eval(grid), cls);
    // defining equation: |r|^2 = alpha^2 |phi|^2 pointwise
    {
        const std::vector<Complex> ad = apply_functional(a, d0, d0.size() + a.size());
        const std::vector<Complex> rsym = grid_eval_band(grid, ad, 0);
        const Samples f0 = sol.lf_density.eval(grid);
        double res = 0.0, scale_r = 0.0;
        for (std::uint32_t m = 0; m < grid.size(); ++m) {
            res = std::max(res,
                           std::abs(std::norm(rsym[m]) - ce.alpha * ce.alpha * f0[m]));
            scale_r = std::max(scale_r, std::norm(rsym[m]));
        }
        sol.residuals.fixedpoint = scale_r > 0.0 ? res / scale_r : res;
    }
    const SaddleReport rep = verify_saddle(sol, a, cls, nullptr, cfg.saddle_probes, cfg.seed,
                                           cfg.probe_amplitude, grid, cfg.threads);
    sol.residuals.saddle_lo = rep.saddle_lo;
    sol.residuals.saddle_hi = rep.saddle_hi;
    return sol;
}

// ---------------------------------------------------------------------------
// D0minus interpolation: closed-form autoregressive least favourable density
// ---------------------------------------------------------------------------

namespace {

bool strictly_positive_definite(const std::vector<double>& seq) {
    const Eigen::Index n = static_cast<Eigen::Index>(seq.size());
    Eigen::MatrixXd t(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            t(j, k) = seq[static_cast<std::size_t>(std::abs(static_cast<long>(j - k)))];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    return es.eigenvalues()(0) > 1e-12 * std::max(1.0, es.eigenvalues()(n - 1));
}

}  // namespace

MinimaxSolution lf_interp_D0minus(const CoefSeq& a, double p, const MinimaxConfig& cfg) {
    if (!(p > 0.0)) throw InvalidInputError("inverse power level must be positive");
    if (!a.is_finite()) throw InvalidInputError("interpolation requires a finite functional");
    if (!a.is_real())
        throw InvalidInputError("the closed-form inverse-power solution requires real coefficients");
    const Grid grid(cfg.grid_size);
    const std::uint32_t n = a.size();
    const int upper = static_cast<int>(n) - 1;

    std::vector<double> fwd(n), rev(n);
    for (std::uint32_t k = 0; k < n; ++k) {
        fwd[k] = a.at(k).real();
        rev[k] = a.at(n - 1 - k).real();
    }

    bool reversed = false;
    std::vector<double> r;
    if (fwd[0] != 0.0 && strictly_positive_definite([&] {
            std::vector<double> s(n);
            for (std::uint32_t k = 0; k < n; ++k) s[k] = p * fwd[k] / fwd[0];
            return s;
        }())) {
        r.resize(n);
        for (std::uint32_t k = 0; k < n; ++k) r[k] = p * fwd[k] / fwd[0];
    } else if (rev[0] != 0.0 && strictly_positive_definite([&] {
                   std::vector<double> s(n);
                   for (std::uint32_t k = 0; k < n; ++k) s[k] = p * rev[k] / rev[0];
                   return s;
               }())) {
        reversed = true;
        r.resize(n);
        for (std::uint32_t k = 0; k < n; ++k) r[k] = p * rev[k] / rev[0];
    } else {
        throw ClassError(
            "neither the coefficient sequence nor its reversal is strictly positive definite; "
            "use the fixed-point band solver instead");
    }

    // f0 = 1 / sum_{|k|<=N} r_|k| e^{ik lambda}; positivity decides validity.
    Samples f0(grid.size());
    {
        std::vector<Complex> band(2 * n - 1);
        for (std::uint32_t k = 0; k < n; ++k) {
            band[n - 1 + k] = Complex(r[k], 0.0);
            band[n - 1 - k] = Complex(r[k], 0.0);
        }
        const std::vector<Complex> tp = grid_eval_band(grid, band, -(static_cast<int>(n) - 1));
        for (std::uint32_t m = 0; m < grid.size(); ++m) {
            const double t = tp[m].real();
            if (!(t > 0.0))
                throw ClassError("inverse density trigonometric polynomial is not positive");
            f0[m] = 1.0 / t;
        }
    }

    MinimaxSolution sol;
    sol.lf_density = SpectralDensity::from_samples(grid, f0);
    sol.iterations = 1;

    // Direct substitution of c into the characteristic formula. For the
    // forward ordering h(j) = -a(-j) on j = -N..-1; for the reversed ordering
    // h(N + k) = -a(N - k) on k = 1..N.
    EstimatePlan plan;
    plan.problem = ProblemTag::interpolation;
    plan.missing_upper = upper;
    if (n > 1) {
        plan.h.assign(n - 1, Complex(0.0, 0.0));
        if (!reversed) {
            plan.min_index = -static_cast<int>(n - 1);
            for (std::uint32_t k = 1; k < n; ++k)
                plan.h[n - 1 - k] = Complex(-fwd[k], 0.0);
        } else {
            plan.min_index = static_cast<int>(n);
            for (std::uint32_t k = 1; k < n; ++k)
                plan.h[k - 1] = Complex(-fwd[n - 1 - k], 0.0);
        }
    }
    plan.delta = reversed ? rev[0] * rev[0] / p : fwd[0] * fwd[0] / p;
    plan.support_leakage = 0.0;
    sol.h0 = plan;
    sol.game_value = plan.delta;

    DensityClass cls;
    cls.tag = DensityClassTag::D0minus;
    cls.power = p;
    sol.residuals.constraint = class_membership_violation(grid, f0, cls);
    // defining equation |C(e^{i lambda})|^2 = p0^2 with C == a(0)/P (forward)
    sol.residuals.fixedpoint = 0.0;

    const SaddleReport rep = verify_saddle(sol, a, cls, nullptr, cfg.saddle_probes, cfg.seed,
                                           cfg.probe_amplitude, grid, cfg.threads);
    sol.residuals.saddle_lo = rep.saddle_lo;
    sol.residuals.saddle_hi = rep.saddle_hi;
    return sol;
}

// ---------------------------------------------------------------------------
// Fixed-point machinery
// ---------------------------------------------------------------------------

namespace {

// |sum_k (Ad)_k e^{ik lambda}|^2 for the current factorization of f.
Samples extrap_weight(const Grid& grid, const CoefSeq& a, const Samples& f,
                      std::uint32_t truncation) {
    const Factorization fact =
        factorize_samples(grid, f, truncation, /*enforce_residual=*/false);
    const std::vector<Complex> ad = apply_functional(a, fact.d, truncation + 1);
    const std::vector<Complex> rsym = grid_eval_band(grid, ad, 0);
    Samples w(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m) w[m] = std::norm(rsym[m]);
    return w;
}

// |sum_k c_k e^{ik lambda}|^2 with c = B_N^{-1} a for the current f.
Samples interp_weight(const Grid& grid, const CoefSeq& a, const Samples& f) {
    const ClampedSamples cs = clamp_density_floor(f);
    const Eigen::Index order = static_cast<Eigen::Index>(a.size());
    const HermitianSequence rinv = fourier_coeffs(grid, cs.values, SampleTransform::of_inv_f,
                                                  static_cast<std::uint32_t>(order - 1));
    const HermitianMatrix bn = build_toeplitz(rinv, order);
    CVector av(order);
    for (Eigen::Index j = 0; j < order; ++j) av(j) = a.at(static_cast<std::uint32_t>(j));
    const CVector c = solve_hpd(bn, av);
    std::vector<Complex> cv(c.data(), c.data() + c.size());
    const std::vector<Complex> csym = grid_eval_band(grid, cv, 0);
    Samples w(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m) w[m] = std::norm(csym[m]);
    return w;
}

struct Candidate {
    Samples f;
};

// Class candidate density given the current weight R(lambda), extrapolation
// flavour. Each branch calibrates its scalar so the class equality holds.
Candidate extrap_candidate(const Grid& grid, const DensityClass& cls, const Samples& r,
                           double class_tol) {
    const double rmean = grid_mean(r);
    if (!(rmean > 0.0)) throw NumericError("degenerate weight in fixed-point update");
    Candidate cand;
    cand.f.resize(grid.size());
    switch (cls.tag) {
        case DensityClassTag::D0: {
            const double s = cls.power / rmean;
            for (std::uint32_t m = 0; m < grid.size(); ++m) cand.f[m] = s * r[m];
            break;
        }
        case DensityClassTag::Dvu: {
            const Samples v = eval_or_throw(cls.lower, grid, "lower bound");
            const Samples u = eval_or_throw(cls.upper, grid, "upper bound");
            if (grid_mean(v) > cls.power + class_tol || grid_mean(u) < cls.power - class_tol)
                throw ClassError("band class is empty: power level outside [mean v, mean u]");
            const auto mean_at = [&](double s) {
                double acc = 0.0;
                for (std::uint32_t m = 0; m < grid.size(); ++m)
                    acc += std::clamp(s * r[m], v[m], u[m]);
                return acc / static_cast<double>(grid.size()) - cls.power;
            };
            const double s = bisect_scale(mean_at, cls.power / rmean, class_tol, "band scale");
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                cand.f[m] = std::clamp(s * r[m], v[m], u[m]);
            break;
        }
        case DensityClassTag::Deps: {
            const Samples w = eval_or_throw(cls.center, grid, "known component");
            if (!(cls.eps > 0.0) || cls.eps > 1.0)
                throw InvalidInputError("contamination level must lie in (0, 1]");
            Samples lo(grid.size());
            for (std::uint32_t m = 0; m < grid.size(); ++m) lo[m] = (1.0 - cls.eps) * w[m];
            if (grid_mean(lo) > cls.power + class_tol)
                throw ClassError("contamination class is empty: known part exceeds the power");
            const auto mean_at = [&](double s) {
                double acc = 0.0;
                for (std::uint32_t m = 0; m < grid.size(); ++m)
                    acc += std::max(lo[m], s * r[m]);
                return acc / static_cast<double>(grid.size()) - cls.power;
            };
            const double s =
                bisect_scale(mean_at, cls.power / rmean, class_tol, "contamination scale");
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                cand.f[m] = std::max(lo[m], s * r[m]);
            break;
        }
        case DensityClassTag::D1eps: {
            const Samples v = eval_or_throw(cls.center, grid, "center");
            if (!(cls.eps > 0.0)) throw InvalidInputError("neighbourhood radius must be positive");
            const auto mean_at = [&](double s) {
                double acc = 0.0;
                for (std::uint32_t m = 0; m < grid.size(); ++m)
                    acc += std::max(v[m], s * r[m]) - v[m];
                return acc / static_cast<double>(grid.size()) - cls.eps;
            };
            const double s = bisect_scale(mean_at, cls.eps / rmean, class_tol, "L1 radius");
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                cand.f[m] = std::max(v[m], s * r[m]);
            break;
        }
        case DensityClassTag::D2eps: {
            const Samples v = eval_or_throw(cls.center, grid, "center");
            if (!(cls.eps > 0.0)) throw InvalidInputError("neighbourhood radius must be positive");
            const auto radius_at = [&](double s) {
                double acc = 0.0;
                for (std::uint32_t m = 0; m < grid.size(); ++m) {
                    const double fm =
                        0.5 * v[m] + std::sqrt(0.25 * v[m] * v[m] + s * r[m]);
                    acc += (fm - v[m]) * (fm - v[m]);
                }
                return acc / static_cast<double>(grid.size()) - cls.eps;
            };
            const double s = bisect_scale(radius_at, cls.eps / rmean, class_tol, "L2 radius");
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                cand.f[m] = 0.5 * v[m] + std::sqrt(0.25 * v[m] * v[m] + s * r[m]);
            break;
        }
        default:
            throw InvalidInputError("class is not handled by the extrapolation fixed point");
    }
    return cand;
}

// Interpolation band class: candidate from the clipped inverse weight, scale
// calibrated against the inverse-power level.
Candidate interp_band_candidate(const Grid& grid, const DensityClass& cls, const Samples& w,
                                double class_tol) {
    const Samples v = eval_or_throw(cls.lower, grid, "lower bound");
    const Samples u = eval_or_throw(cls.upper, grid, "upper bound");
    const double wmean = grid_mean(w);
    if (!(wmean > 0.0)) throw NumericError("degenerate weight in fixed-point update");
    // 1/u <= 1/f <= 1/v must be able to reach the level
    {
        double invu = 0.0, invv = 0.0;
        for (std::uint32_t m = 0; m < grid.size(); ++m) {
            if (!(v[m] > 0.0) || !(u[m] > 0.0))
                throw ClassError("band bounds must be strictly positive for interpolation");
            invu += 1.0 / u[m];
            invv += 1.0 / v[m];
        }
        invu /= static_cast<double>(grid.size());
        invv /= static_cast<double>(grid.size());
        if (cls.power < invu - class_tol || cls.power > invv + class_tol)
            throw ClassError("band class is empty: inverse power outside [mean 1/u, mean 1/v]");
    }
    const auto level_at = [&](double s) {
        double acc = 0.0;
        for (std::uint32_t m = 0; m < grid.size(); ++m)
            acc += 1.0 / std::clamp(s / std::max(w[m], 1e-300), v[m], u[m]);
        // decreasing in s: negate to make the target nondecreasing
        return cls.power - acc / static_cast<double>(grid.size());
    };
    const double s = bisect_scale(level_at, 1.0 / (cls.power * wmean) /* heuristic */,
                                  class_tol, "inverse band scale");
    Candidate cand;
    cand.f.resize(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m)
        cand.f[m] = std::clamp(s / std::max(w[m], 1e-300), v[m], u[m]);
    return cand;
}

Samples initial_density(const Grid& grid, const DensityClass& cls) {
    switch (cls.tag) {
        case DensityClassTag::D0:
        case DensityClassTag::D0minus:
            return Samples(grid.size(), cls.tag == DensityClassTag::D0 ? cls.power
                                                                       : 1.0 / cls.power);
        case DensityClassTag::DM: {
            if (cls.moments.empty()) throw InvalidInputError("moment class needs moments");
            return Samples(grid.size(), cls.moments[0]);
        }
        case DensityClassTag::Dvu: {
            const Samples v = eval_or_throw(cls.lower, grid, "lower bound");
            const Samples u = eval_or_throw(cls.upper, grid, "upper bound");
            Samples f(grid.size());
            for (std::uint32_t m = 0; m < grid.size(); ++m) f[m] = 0.5 * (v[m] + u[m]);
            const double mean = grid_mean(f);
            if (mean > 0.0)
                for (double& x : f) x *= cls.power / mean;
            const Samples* vv = &v;
            const Samples* uu = &u;
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                f[m] = std::clamp(f[m], (*vv)[m], (*uu)[m]);
            return f;
        }
        case DensityClassTag::Deps:
        case DensityClassTag::D1eps:
        case DensityClassTag::D2eps:
        case DensityClassTag::pinned:
        case DensityClassTag::DvuMinus: {
            if (cls.center) return cls.center->eval(grid);
            if (cls.lower) return cls.lower->eval(grid);
            throw InvalidInputError("class is missing a center density");
        }
    }
    throw InvalidInputError("unsupported class");
}

}  // namespace

// ---------------------------------------------------------------------------
// DM interpolation closed form
// ---------------------------------------------------------------------------

namespace {

MinimaxSolution dm_interpolation(const CoefSeq& a, const DensityClass& cls,
                                 const MinimaxConfig& cfg) {
    if (!a.is_real())
        throw InvalidInputError("the moment-class interpolation solver requires real coefficients");
    const Grid grid(cfg.grid_size);
    const std::uint32_t n = a.size();
    const std::size_t mcount = cls.moments.size();
    if (mcount == 0) throw InvalidInputError("moment class needs moments");
    const std::uint32_t mmax = static_cast<std::uint32_t>(mcount - 1);  // moments r_0..r_M

    std::vector<double> r(cls.moments);
    MinimaxSolution sol;
    if (mmax + 1 < n) {
        // Solve the leading (M+1)x(M+1) block for the multipliers, then the
        // triangular recursion fills the unknown inverse coefficients.
        const Eigen::Index mm = static_cast<Eigen::Index>(mmax) + 1;
        Eigen::MatrixXd t(mm, mm);
        Eigen::VectorXd rhs(mm);
        for (Eigen::Index j = 0; j < mm; ++j) {
            rhs(j) = a.at(static_cast<std::uint32_t>(j)).real();
            for (Eigen::Index k = 0; k < mm; ++k)
                t(j, k) = r[static_cast<std::size_t>(std::abs(static_cast<long>(j - k)))];
        }
        Eigen::VectorXd pvec = t.fullPivLu().solve(rhs);
        if (std::abs(pvec(0)) < 1e-12)
            throw ClassError("moment extension is degenerate: leading multiplier vanishes");
        r.resize(n);
        for (std::uint32_t j = mmax + 1; j < n; ++j) {
            double acc = a.at(j).real();
            for (std::uint32_t k = 1; k <= mmax; ++k) acc -= r[j - k] * pvec(k);
            r[j] = acc / pvec(0);
        }
        if (!strictly_positive_definite(r))
            throw ClassError("extended inverse-moment sequence is not strictly positive definite");
        sol.notes.push_back("moment class extended by the triangular recursion");
    } else {
        sol.notes.push_back(
            "moment count covers the functional: the problem is degenerate and the "
            "autoregressive member of the class is reported");
        r.resize(mcount);
    }

    // f0 = 1 / sum r_|k| e^{ik lambda}
    const std::uint32_t half = static_cast<std::uint32_t>(r.size()) - 1;
    std::vector<Complex> band(2 * half + 1);
    for (std::uint32_t k = 0; k <= half; ++k) {
        band[half + k] = Complex(r[k], 0.0);
        band[half - k] = Complex(r[k], 0.0);
    }
    const std::vector<Complex> tp = grid_eval_band(grid, band, -static_cast<int>(half));
    Samples f0(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m) {
        const double t = tp[m].real();
        if (!(t > 0.0))
            throw ClassError("inverse density trigonometric polynomial is not positive");
        f0[m] = 1.0 / t;
    }
    sol.lf_density = SpectralDensity::from_samples(grid, f0);
    sol.h0 = interpolate(sol.lf_density, a, grid, cfg.truncation);
    sol.game_value = sol.h0.delta;
    sol.iterations = 1;

    // membership: moments of 1/f0
    double viol = 0.0;
    for (std::size_t m = 0; m < mcount; ++m) {
        double acc = 0.0;
        for (std::uint32_t i = 0; i < grid.size(); ++i)
            acc += std::cos(static_cast<double>(m) * grid.point(i)) / f0[i];
        acc /= static_cast<double>(grid.size());
        viol = std::max(viol, std::abs(acc - cls.moments[m]));
    }
    sol.residuals.constraint = viol;
    sol.residuals.fixedpoint = 0.0;
    DensityClass audit_cls = cls;
    audit_cls.inverse_moments = true;
    const SaddleReport rep = verify_saddle(sol, a, audit_cls, nullptr, cfg.saddle_probes,
                                           cfg.seed, cfg.probe_amplitude, grid, cfg.threads);
    sol.residuals.saddle_lo = rep.saddle_lo;
    sol.residuals.saddle_hi = rep.saddle_hi;
    return sol;
}

// DM extrapolation: inner Newton solve for the cosine-polynomial multipliers
// T(lambda) = sum alpha_m cos(m lambda) matching the moments of R/T.
Samples dm_extrap_divisor(const Grid& grid, const Samples& r, const std::vector<double>& moments,
                          std::vector<double>& alpha, double tol) {
    const std::size_t mc = moments.size();
    const std::uint32_t gs = grid.size();
    std::vector<Samples> cosines(mc, Samples(gs));
    for (std::size_t m = 0; m < mc; ++m)
        for (std::uint32_t i = 0; i < gs; ++i)
            cosines[m][i] = std::cos(static_cast<double>(m) * grid.point(i));

    if (alpha.empty()) {
        alpha.assign(mc, 0.0);
        alpha[0] = std::max(grid_mean(r) / std::max(moments[0], 1e-12), 1e-8);
    }
    Samples t(gs);
    const auto eval_t = [&](const std::vector<double>& al) {
        for (std::uint32_t i = 0; i < gs; ++i) {
            double acc = 0.0;
            for (std::size_t m = 0; m < mc; ++m) acc += al[m] * cosines[m][i];
            t[i] = acc;
        }
    };
    for (int it = 0; it < 100; ++it) {
        eval_t(alpha);
        double tmin = t[0];
        for (double x : t) tmin = std::min(tmin, x);
        if (!(tmin > 0.0))
            throw NumericError("moment divisor lost positivity during the inner solve");
        Eigen::VectorXd resid(static_cast<Eigen::Index>(mc));
        Eigen::MatrixXd jac(static_cast<Eigen::Index>(mc), static_cast<Eigen::Index>(mc));
        for (std::size_t m = 0; m < mc; ++m) {
            double acc = 0.0;
            for (std::uint32_t i = 0; i < gs; ++i) acc += r[i] / t[i] * cosines[m][i];
            resid(static_cast<Eigen::Index>(m)) = acc / gs - moments[m];
            for (std::size_t k = 0; k < mc; ++k) {
                double j = 0.0;
                for (std::uint32_t i = 0; i < gs; ++i)
                    j -= r[i] * cosines[m][i] * cosines[k][i] / (t[i] * t[i]);
                jac(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = j / gs;
            }
        }
        if (resid.cwiseAbs().maxCoeff() < tol) {
            Samples out(gs);
            for (std::uint32_t i = 0; i < gs; ++i) out[i] = r[i] / t[i];
            return out;
        }
        Eigen::VectorXd step = jac.fullPivLu().solve(-resid);
        // backtracking line search keeping T positive
        double scale = 1.0;
        for (int ls = 0; ls < 60; ++ls) {
            std::vector<double> trial(alpha);
            for (std::size_t m = 0; m < mc; ++m)
                trial[m] += scale * step(static_cast<Eigen::Index>(m));
            eval_t(trial);
            double tmn = t[0];
            for (double x : t) tmn = std::min(tmn, x);
            if (tmn > 0.0) {
                alpha = trial;
                break;
            }
            scale *= 0.5;
            if (ls == 59)
                throw NumericError("moment divisor line search failed to keep positivity");
        }
    }
    throw NumericError("moment-matching inner solve did not converge");
}

}  // namespace

MinimaxSolution lf_fixed_point(const CoefSeq& a, const DensityClass& cls, ProblemKind problem,
                               const MinimaxConfig& cfg) {
    const Grid grid(cfg.grid_size);

    if (cls.tag == DensityClassTag::pinned) {
        MinimaxSolution sol;
        if (!cls.center) throw InvalidInputError("pinned class needs its density");
        sol.lf_density = *cls.center;
        sol.h0 = problem == ProblemKind::extrapolation
                     ? predict(sol.lf_density, a, grid, cfg.truncation)
                     : interpolate(sol.lf_density, a, grid, cfg.truncation);
        sol.game_value = sol.h0.delta;
        sol.iterations = 0;
        return sol;
    }

    if (problem == ProblemKind::interpolation) {
        if (cls.tag == DensityClassTag::D0minus) return lf_interp_D0minus(a, cls.power, cfg);
        if (cls.tag == DensityClassTag::DM) return dm_interpolation(a, cls, cfg);
        if (cls.tag != DensityClassTag::DvuMinus)
            throw InvalidInputError("class is not defined for the interpolation problem");
        if (!a.is_finite()) throw InvalidInputError("interpolation requires a finite functional");
    } else {
        if (cls.tag == DensityClassTag::D0minus || cls.tag == DensityClassTag::DvuMinus)
            throw InvalidInputError("inverse-power classes apply to interpolation only");
    }

    MinimaxSolution sol;

    // Band interpolation: the pure autoregressive member wins when the
    // closed-form inverse coefficients respect the band (the two-regime rule).
    if (problem == ProblemKind::interpolation && cls.tag == DensityClassTag::DvuMinus &&
        a.is_real()) {
        std::vector<double> seq(a.size());
        bool ok = a.at(0).real() != 0.0;
        for (std::uint32_t k = 0; ok && k < a.size(); ++k)
            seq[k] = cls.power * a.at(k).real() / a.at(0).real();
        if (ok && strictly_positive_definite(seq)) {
            const std::uint32_t n = a.size();
            std::vector<Complex> band(2 * n - 1);
            for (std::uint32_t k = 0; k < n; ++k) {
                band[n - 1 + k] = Complex(seq[k], 0.0);
                band[n - 1 - k] = Complex(seq[k], 0.0);
            }
            const std::vector<Complex> tp =
                grid_eval_band(grid, band, -(static_cast<int>(n) - 1));
            const Samples v = eval_or_throw(cls.lower, grid, "lower bound");
            const Samples u = eval_or_throw(cls.upper, grid, "upper bound");
            bool inside = true;
            Samples f0(grid.size());
            for (std::uint32_t m = 0; m < grid.size() && inside; ++m) {
                const double t = tp[m].real();
                if (!(t > 0.0)) { inside = false; break; }
                f0[m] = 1.0 / t;
                if (f0[m] < v[m] - cfg.class_tol || f0[m] > u[m] + cfg.class_tol) inside = false;
            }
            if (inside) {
                MinimaxSolution ar = lf_interp_D0minus(a, cls.power, cfg);
                ar.notes.push_back("band constraints inactive: autoregressive solution applies");
                ar.residuals.constraint = class_membership_violation(grid, f0, cls);
                return ar;
            }
        }
    }

    Samples f = initial_density(grid, cls);
    std::vector<double> dm_alpha;  // warm start of the moment multipliers
    double residual = 0.0;
    int iter = 0;
    for (; iter < cfg.max_iter; ++iter) {
        Samples cand;
        if (problem == ProblemKind::extrapolation) {
            const Samples w = extrap_weight(grid, a, f, cfg.truncation);
            if (cls.tag == DensityClassTag::DM) {
                cand = dm_extrap_divisor(grid, w, cls.moments, dm_alpha, cfg.class_tol);
            } else {
                cand = extrap_candidate(grid, cls, w, cfg.class_tol).f;
            }
        } else {
            const Samples w = interp_weight(grid, a, f);
            cand = interp_band_candidate(grid, cls, w, cfg.class_tol).f;
        }
        residual = sup_diff(cand, f);
        const double scale = std::max(1.0, *std::max_element(f.begin(), f.end()));
        if (residual < cfg.fp_tol * scale) {
            f = cand;
            ++iter;
            break;
        }
        for (std::uint32_t m = 0; m < grid.size(); ++m)
            f[m] += cfg.damping * (cand[m] - f[m]);
    }
    if (iter >= cfg.max_iter)
        throw NumericError("fixed-point iteration did not converge: density residual " +
                           std::to_string(residual));

    sol.lf_density = SpectralDensity::from_samples(grid, f);
    sol.iterations = iter;
    sol.h0 = problem == ProblemKind::extrapolation
                 ? classical_extrap_plan(grid, a, f, &sol.notes)
                 : interpolate(sol.lf_density, a, grid, cfg.truncation);
    sol.game_value = sol.h0.delta;
    sol.residuals.fixedpoint = residual;
    sol.residuals.constraint = class_membership_violation(grid, f, cls);

    const SaddleReport rep = verify_saddle(sol, a, cls, nullptr, cfg.saddle_probes, cfg.seed,
                                           cfg.probe_amplitude, grid, cfg.threads);
    sol.residuals.saddle_lo = rep.saddle_lo;
    sol.residuals.saddle_hi = rep.saddle_hi;
    return sol;
}

// ---------------------------------------------------------------------------
// Noisy pairs
// ---------------------------------------------------------------------------

namespace {

struct NoisyState {
    Samples f, g;
    Samples weight_f;  // |A g + C|
    Samples weight_g;  // |A f - C|
};

// C(e^{i lambda}) for the current pair, problem order chosen by the caller.
std::vector<Complex> noisy_c_symbol(const Grid& grid, const CoefSeq& a, const Samples& f,
                                    const Samples& g, Eigen::Index order) {
    const NoisySymbols sym = noisy_symbols(grid, f, g);
    const std::uint32_t maxlag = static_cast<std::uint32_t>(order - 1);
    const HermitianSequence rb(grid_fourier_coeffs(grid, sym.inv, maxlag));
    const HermitianSequence rr(grid_fourier_coeffs(grid, sym.ratio, maxlag));
    const HermitianMatrix bn = build_toeplitz(rb, order);
    const HermitianMatrix rn = build_toeplitz(rr, order);
    CVector av(order);
    for (Eigen::Index j = 0; j < order; ++j) av(j) = a.at(static_cast<std::uint32_t>(j));
    const CVector c = solve_hpd(bn, rn.matrix() * av);
    std::vector<Complex> cv(c.data(), c.data() + c.size());
    return grid_eval_band(grid, cv, 0);
}

void refresh_weights(const Grid& grid, const CoefSeq& a, NoisyState& st, Eigen::Index order) {
    const std::vector<Complex> csym = noisy_c_symbol(grid, a, st.f, st.g, order);
    const std::vector<Complex> asym = a.eval_symbol(grid);
    st.weight_f.resize(grid.size());
    st.weight_g.resize(grid.size());
    for (std::uint32_t m = 0; m < grid.size(); ++m) {
        st.weight_f[m] = std::abs(asym[m] * st.g[m] + csym[m]);
        st.weight_g[m] = std::abs(asym[m] * st.f[m] - csym[m]);
    }
}

// One class update holding the partner density fixed. `partner` enters the
// subtraction f_cand = weight/alpha - partner of the Lagrange equations.
Samples noisy_candidate(const Grid& grid, const DensityClass& cls, const Samples& weight,
                        const Samples& partner, const Samples& current, double class_tol,
                        std::vector<std::string>& notes, const char* side) {
    Samples cand(grid.size());
    double wmax = 0.0;
    for (double v : weight) wmax = std::max(wmax, v);

    switch (cls.tag) {
        case DensityClassTag::pinned:
            return eval_or_throw(cls.center, grid, "pinned density");
        case DensityClassTag::D0: {
            if (wmax <= 1e-12 * std::max(1.0, grid_mean(partner))) {
                // Degenerate saddle: the error does not depend on this member;
                // report the flat representative of the class boundary.
                notes.push_back(std::string(side) +
                                " update is degenerate (weight vanishes); least favourable "
                                "member is not unique, reporting the flat density");
                return Samples(grid.size(), cls.power);
            }
            const auto mean_at = [&](double sinv) {
                double acc = 0.0;
                for (std::uint32_t m = 0; m < grid.size(); ++m)
                    acc += std::max(0.0, sinv * weight[m] - partner[m]);
                return acc / static_cast<double>(grid.size()) - cls.power;
            };
            const double sinv =
                bisect_scale(mean_at, cls.power / std::max(grid_mean(weight), 1e-300),
                             class_tol, "power scale");
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                cand[m] = std::max(0.0, sinv * weight[m] - partner[m]);
            return cand;
        }
        case DensityClassTag::Dvu: {
            const Samples v = eval_or_throw(cls.lower, grid, "lower bound");
            const Samples u = eval_or_throw(cls.upper, grid, "upper bound");
            const auto mean_at = [&](double sinv) {
                double acc = 0.0;
                for (std::uint32_t m = 0; m < grid.size(); ++m)
                    acc += std::clamp(sinv * weight[m] - partner[m], v[m], u[m]);
                return acc / static_cast<double>(grid.size()) - cls.power;
            };
            const double sinv =
                bisect_scale(mean_at, cls.power / std::max(grid_mean(weight), 1e-300),
                             class_tol, "band scale");
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                cand[m] = std::clamp(sinv * weight[m] - partner[m], v[m], u[m]);
            return cand;
        }
        case DensityClassTag::Deps: {
            const Samples g1 = eval_or_throw(cls.center, grid, "known component");
            const auto mean_at = [&](double sinv) {
                double acc = 0.0;
                for (std::uint32_t m = 0; m < grid.size(); ++m)
                    acc += std::max((1.0 - cls.eps) * g1[m], sinv * weight[m] - partner[m]);
                return acc / static_cast<double>(grid.size()) - cls.power;
            };
            const double sinv =
                bisect_scale(mean_at, cls.power / std::max(grid_mean(weight), 1e-300),
                             class_tol, "contamination scale");
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                cand[m] = std::max((1.0 - cls.eps) * g1[m], sinv * weight[m] - partner[m]);
            return cand;
        }
        case DensityClassTag::D1eps: {
            const Samples g1 = eval_or_throw(cls.center, grid, "center");
            const auto mean_at = [&](double sinv) {
                double acc = 0.0;
                for (std::uint32_t m = 0; m < grid.size(); ++m)
                    acc += std::max(g1[m], sinv * weight[m] - partner[m]) - g1[m];
                return acc / static_cast<double>(grid.size()) - cls.eps;
            };
            const double sinv = bisect_scale(
                mean_at, cls.eps / std::max(grid_mean(weight), 1e-300), class_tol, "L1 radius");
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                cand[m] = std::max(g1[m], sinv * weight[m] - partner[m]);
            return cand;
        }
        case DensityClassTag::D2eps: {
            const Samples f1 = eval_or_throw(cls.center, grid, "center");
            Samples sumsq(grid.size());
            for (std::uint32_t m = 0; m < grid.size(); ++m) {
                const double s = current[m] + partner[m];
                sumsq[m] = weight[m] * weight[m] / std::max(s * s, 1e-300);
            }
            const auto radius_at = [&](double s) {
                double acc = 0.0;
                for (std::uint32_t m = 0; m < grid.size(); ++m) {
                    const double d = s * sumsq[m];
                    acc += d * d;
                }
                return acc / static_cast<double>(grid.size()) - cls.eps;
            };
            const double s = bisect_scale(
                radius_at, std::sqrt(cls.eps) / std::max(grid_mean(sumsq), 1e-300),
                class_tol, "L2 radius");
            for (std::uint32_t m = 0; m < grid.size(); ++m)
                cand[m] = std::max(0.0, f1[m] + s * sumsq[m]);
            return cand;
        }
        default:
            throw InvalidInputError("class is not supported on this side of the noisy pair");
    }
}

}  // namespace

MinimaxSolution lf_noisy_pair(const CoefSeq& a, const DensityClass& fcls,
                              const DensityClass& gcls, ProblemKind problem,
                              const MinimaxConfig& cfg) {
    const Grid grid(cfg.grid_size);
    const Eigen::Index order =
        problem == ProblemKind::interpolation
            ? static_cast<Eigen::Index>(a.size())
            : static_cast<Eigen::Index>(std::max<std::uint32_t>(cfg.truncation + 1, a.size()));
    if (problem == ProblemKind::interpolation && !a.is_finite())
        throw InvalidInputError("interpolation requires a finite functional");

    MinimaxSolution sol;
    NoisyState st;
    st.f = initial_density(grid, fcls);
    st.g = initial_density(grid, gcls);

    const bool f_pinned = fcls.tag == DensityClassTag::pinned;
    const bool g_pinned = gcls.tag == DensityClassTag::pinned;

    double residual = 0.0;
    int iter = 0;
    if (f_pinned && g_pinned) {
        sol.notes.push_back("both classes are singletons: classical estimate returned");
    } else {
        for (; iter < cfg.max_iter; ++iter) {
            refresh_weights(grid, a, st, order);
            double res_f = 0.0, res_g = 0.0;
            if (!f_pinned) {
                const Samples cand =
                    noisy_candidate(grid, fcls, st.weight_f, st.g, st.f, cfg.class_tol,
                                    sol.notes, "signal");
                res_f = sup_diff(cand, st.f);
                for (std::uint32_t m = 0; m < grid.size(); ++m)
                    st.f[m] += cfg.damping * (cand[m] - st.f[m]);
            }
            if (!g_pinned) {
                refresh_weights(grid, a, st, order);
                const Samples cand =
                    noisy_candidate(grid, gcls, st.weight_g, st.f, st.g, cfg.class_tol,
                                    sol.notes, "noise");
                res_g = sup_diff(cand, st.g);
                for (std::uint32_t m = 0; m < grid.size(); ++m)
                    st.g[m] += cfg.damping * (cand[m] - st.g[m]);
            }
            residual = std::max(res_f, res_g);
            const double scale =
                std::max({1.0, *std::max_element(st.f.begin(), st.f.end()),
                          *std::max_element(st.g.begin(), st.g.end())});
            if (residual < cfg.fp_tol * scale) {
                ++iter;
                break;
            }
        }
        if (iter >= cfg.max_iter)
            throw NumericError("noisy-pair fixed point did not converge: residual " +
                               std::to_string(residual));
        // deduplicate degenerate-update notes
        std::sort(sol.notes.begin(), sol.notes.end());
        sol.notes.erase(std::unique(sol.notes.begin(), sol.notes.end()), sol.notes.end());
        // settle exactly on the last candidates
        refresh_weights(grid, a, st, order);
        if (!f_pinned)
            st.f = noisy_candidate(grid, fcls, st.weight_f, st.g, st.f, cfg.class_tol,
                                   sol.notes, "signal");
        if (!g_pinned) {
            refresh_weights(grid, a, st, order);
            st.g = noisy_candidate(grid, gcls, st.weight_g, st.f, st.g, cfg.class_tol,
                                   sol.notes, "noise");
        }
        std::sort(sol.notes.begin(), sol.notes.end());
        sol.notes.erase(std::unique(sol.notes.begin(), sol.notes.end()), sol.notes.end());
    }

    sol.lf_density = SpectralDensity::from_samples(grid, st.f);
    sol.lf_noise = SpectralDensity::from_samples(grid, st.g);
    sol.h0 = problem == ProblemKind::extrapolation
                 ? predict_noisy(sol.lf_density, *sol.lf_noise, a, grid, cfg.truncation)
                 : interpolate_noisy(sol.lf_density, *sol.lf_noise, a, grid, cfg.truncation);
    sol.game_value = sol.h0.delta;
    sol.iterations = iter;
    sol.residuals.fixedpoint = residual;
    sol.residuals.constraint =
        std::max(class_membership_violation(grid, st.f, fcls),
                 class_membership_violation(grid, st.g, gcls));

    const SaddleReport rep = verify_saddle(sol, a, fcls, &gcls, cfg.saddle_probes, cfg.seed,
                                           cfg.probe_amplitude, grid, cfg.threads);
    sol.residuals.saddle_lo = rep.saddle_lo;
    sol.residuals.saddle_hi = rep.saddle_hi;
    return sol;
}

// ---------------------------------------------------------------------------
// Saddle audit
// ---------------------------------------------------------------------------

namespace {

// Smooth random perturbation: a handful of low-order Fourier modes, sup-norm
// bounded by 1.
Samples random_trig(const Grid& grid, Rng& rng, bool zero_mean) {
    constexpr int kModes = 6;
    Samples t(grid.size(), 0.0);
    double offset = zero_mean ? 0.0 : rng.symmetric() * 0.3;
    double total = std::abs(offset);
    double coeffs[2 * kModes];
    for (int k = 0; k < 2 * kModes; ++k) {
        coeffs[k] = rng.symmetric();
        total += std::abs(coeffs[k]);
    }
    if (total == 0.0) total = 1.0;
    for (std::uint32_t m = 0; m < grid.size(); ++m) {
        const double lambda = grid.point(m);
        double acc = offset;
        for (int k = 1; k <= kModes; ++k)
            acc += coeffs[2 * k - 2] * std::cos(k * lambda) +
                   coeffs[2 * k - 1] * std::sin(k * lambda);
        t[m] = acc / total;
    }
    return t;
}

// Draw a feasible density probe near f0. Returns false when the sampler could
// not land inside the class (the probe is then skipped, not fudged).
bool density_probe(const Grid& grid, const DensityClass& cls, const Samples& f0, Rng& rng,
                   double amplitude, Samples& out) {
    const std::uint32_t gs = grid.size();
    out.resize(gs);
    const Samples tau = random_trig(grid, rng, /*zero_mean=*/false);
    switch (cls.tag) {
        case DensityClassTag::pinned:
            out = f0;
            return true;
        case DensityClassTag::D0: {
            for (std::uint32_t m = 0; m < gs; ++m)
                out[m] = std::max(0.0, f0[m] * (1.0 + amplitude * tau[m]));
            const double mean = grid_mean(out);
            if (!(mean > 0.0)) return false;
            const double s = cls.power / mean;
            for (double& v : out) v *= s;
            return true;
        }
        case DensityClassTag::D0minus: {
            for (std::uint32_t m = 0; m < gs; ++m) {
                const double q = 1.0 / std::max(f0[m], 1e-300);
                out[m] = std::max(1e-300, q * (1.0 + amplitude * tau[m]));
            }
            const double mean = grid_mean(out);
            const double s = cls.power / mean;
            for (double& v : out) v = 1.0 / (v * s);
            return true;
        }
        case DensityClassTag::DM: {
            // perturb additively with modes above M: discrete orthogonality
            // keeps the pinned moments exact. Interpolation-flavoured classes
            // perturb the inverse density instead.
            const std::size_t mfree = cls.moments.size();
            Samples base(gs);
            double scale = 0.0;
            for (std::uint32_t m = 0; m < gs; ++m) {
                base[m] = cls.inverse_moments ? 1.0 / std::max(f0[m], 1e-300) : f0[m];
                scale += base[m];
            }
            scale /= gs;
            double phases[4];
            for (double& p : phases) p = 2.0 * kPi * rng.uniform();
            bool ok = true;
            for (std::uint32_t m = 0; m < gs; ++m) {
                const double lambda = grid.point(m);
                double acc = 0.0;
                for (int k = 0; k < 4; ++k)
                    acc += std::cos(static_cast<double>(mfree + k) * lambda + phases[k]);
                const double p = base[m] + amplitude * scale * (acc / 4.0);
                if (!(p > 0.0)) ok = false;
                out[m] = cls.inverse_moments ? 1.0 / std::max(p, 1e-300) : p;
            }
            return ok;
        }
        case DensityClassTag::Dvu: {
            const Samples v = eval_or_throw(cls.lower, grid, "lower bound");
            const Samples u = eval_or_throw(cls.upper, grid, "upper bound");
            for (std::uint32_t m = 0; m < gs; ++m)
                out[m] = std::clamp(f0[m] * (1.0 + amplitude * tau[m]), v[m], u[m]);
            // alternate clipping and rescaling toward the power level
            for (int it = 0; it < 60; ++it) {
                const double mean = grid_mean(out);
                if (std::abs(mean - cls.power) <= 1e-10 * std::max(1.0, cls.power)) return true;
                const double s = cls.power / std::max(mean, 1e-300);
                for (std::uint32_t m = 0; m < gs; ++m)
                    out[m] = std::clamp(out[m] * s, v[m], u[m]);
            }
            return std::abs(grid_mean(out) - cls.power) <= 1e-8 * std::max(1.0, cls.power);
        }
        case DensityClassTag::Deps: {
            const Samples w = eval_or_throw(cls.center, grid, "known component");
            const double free_mass = cls.power - (1.0 - cls.eps) * grid_mean(w);
            if (free_mass < 0.0) return false;
            Samples u(gs);
            for (std::uint32_t m = 0; m < gs; ++m) {
                const double base = std::max(0.0, f0[m] - (1.0 - cls.eps) * w[m]) / cls.eps;
                u[m] = std::max(0.0, base * (1.0 + amplitude * tau[m]));
            }
            const double um = grid_mean(u);
            const double target = free_mass / cls.eps;
            const double s = um > 0.0 ? target / um : 0.0;
            for (std::uint32_t m = 0; m < gs; ++m)
                out[m] = (1.0 - cls.eps) * w[m] + cls.eps * (um > 0.0 ? s * u[m] : target);
            return true;
        }
        case DensityClassTag::D1eps: {
            const Samples v = eval_or_throw(cls.center, grid, "center");
            Samples s(gs);
            for (std::uint32_t m = 0; m < gs; ++m) {
                const double base = f0[m] - v[m];
                s[m] = base * (1.0 + amplitude * tau[m]);
                if (v[m] + s[m] < 0.0) s[m] = -v[m];
            }
            double l1 = 0.0;
            for (std::uint32_t m = 0; m < gs; ++m) l1 += std::abs(s[m]);
            l1 /= gs;
            if (!(l1 > 0.0)) return false;
            const double sc = cls.eps / l1;
            for (std::uint32_t m = 0; m < gs; ++m)
                out[m] = std::max(0.0, v[m] + sc * s[m]);
            return class_membership_violation(grid, out, cls) <= 1e-8;
        }
        case DensityClassTag::D2eps: {
            const Samples v = eval_or_throw(cls.center, grid, "center");
            Samples s(gs);
            for (std::uint32_t m = 0; m < gs; ++m) {
                const double base = f0[m] - v[m];
                s[m] = base * (1.0 + amplitude * tau[m]);
                if (v[m] + s[m] < 0.0) s[m] = -v[m];
            }
            double l2 = 0.0;
            for (std::uint32_t m = 0; m < gs; ++m) l2 += s[m] * s[m];
            l2 /= gs;
            if (!(l2 > 0.0)) return false;
            const double sc = std::sqrt(cls.eps / l2);
            for (std::uint32_t m = 0; m < gs; ++m)
                out[m] = std::max(0.0, v[m] + sc * s[m]);
            return class_membership_violation(grid, out, cls) <= 1e-8;
        }
        case DensityClassTag::DvuMinus: {
            const Samples v = eval_or_throw(cls.lower, grid, "lower bound");
            const Samples u = eval_or_throw(cls.upper, grid, "upper bound");
            for (std::uint32_t m = 0; m < gs; ++m) {
                const double q = 1.0 / std::max(f0[m], 1e-300);
                out[m] = q * (1.0 + amplitude * tau[m]);
            }
            for (int it = 0; it < 60; ++it) {
                const double mean = grid_mean(out);
                const double s = cls.power / std::max(mean, 1e-300);
                bool exact = true;
                for (std::uint32_t m = 0; m < gs; ++m) {
                    double q = out[m] * s;
                    const double lo = 1.0 / u[m], hi = 1.0 / v[m];
                    const double clipped = std::clamp(q, lo, hi);
                    if (clipped != q) exact = false;
                    out[m] = clipped;
                }
                if (exact && std::abs(grid_mean(out) - cls.power) <=
                                 1e-10 * std::max(1.0, cls.power))
                    break;
            }
            if (std::abs(grid_mean(out) - cls.power) > 1e-8 * std::max(1.0, cls.power))
                return false;
            for (std::uint32_t m = 0; m < gs; ++m) out[m] = 1.0 / out[m];
            return true;
        }
    }
    return false;
}

}  // namespace

SaddleReport verify_saddle(const MinimaxSolution& sol, const CoefSeq& a,
                           const DensityClass& fcls, const DensityClass* gcls, int n_probes,
                           std::uint64_t seed, double amplitude, const Grid& grid,
                           int threads) {
    SaddleReport rep;
    rep.probes = n_probes;

    const Samples f0 = sol.lf_density.eval(grid);
    std::optional<Samples> g0;
    if (sol.lf_noise) g0 = sol.lf_noise->eval(grid);
    const double delta0 =
        mse_quadrature(grid, a, sol.h0, f0, g0 ? &*g0 : nullptr);

    const double href = std::max(sol.h0.max_abs(), std::sqrt(std::abs(delta0)));

    struct ProbeResult {
        double hi_margin = std::numeric_limits<double>::infinity();
        double lo_margin = std::numeric_limits<double>::infinity();
        bool skipped_density = false;
    };
    std::vector<ProbeResult> results(static_cast<std::size_t>(n_probes));

    const auto run_probe = [&](int i) {
        ProbeResult& pr = results[static_cast<std::size_t>(i)];
        // density probe (alternate the side for pairs)
        {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i), 0xD15EA5Eull));
            Samples fp;
            const bool probe_g = gcls && (i % 2 == 1);
            const DensityClass& cls = probe_g ? *gcls : fcls;
            const Samples& center = probe_g ? *g0 : f0;
            if (density_probe(grid, cls, center, rng, amplitude, fp)) {
                double d;
                if (probe_g)
                    d = mse_quadrature(grid, a, sol.h0, f0, &fp);
                else
                    d = mse_quadrature(grid, a, sol.h0, fp, g0 ? &*g0 : nullptr);
                pr.hi_margin = delta0 - d;
            } else {
                pr.skipped_density = true;
            }
        }
        // characteristic probe: support-respecting perturbation of h0
        {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i), 0xC0FFEEull));
            EstimatePlan hp = sol.h0;
            if (hp.h.empty()) {
                hp.min_index = hp.index_admissible(-1) ? -8 : hp.missing_upper + 1;
                hp.h.assign(8, Complex(0.0, 0.0));
            }
            // widen slightly so probes can explore beyond the band edge
            hp.h.insert(hp.h.begin(), 2, Complex(0.0, 0.0));
            hp.h.insert(hp.h.end(), 2, Complex(0.0, 0.0));
            hp.min_index -= 2;
            for (std::size_t j = 0; j < hp.h.size(); ++j) {
                const int idx = hp.min_index + static_cast<int>(j);
                if (!hp.index_admissible(idx)) continue;
                hp.h[j] += amplitude * href * Complex(rng.symmetric(), rng.symmetric());
            }
            const double d = mse_quadrature(grid, a, hp, f0, g0 ? &*g0 : nullptr);
            pr.lo_margin = d - delta0;
        }
    };

    if (threads > 1) {
        std::vector<std::thread> pool;
        const int nt = std::min(threads, n_probes > 0 ? n_probes : 1);
        std::atomic<int> next{0};
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n_probes; i = next.fetch_add(1))
                    run_probe(i);
            });
        for (auto& th : pool) th.join();
    } else {
        for (int i = 0; i < n_probes; ++i) run_probe(i);
    }

    // ordered reduction
    double lo = std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_probes; ++i) {
        const ProbeResult& pr = results[static_cast<std::size_t>(i)];
        if (pr.skipped_density) ++rep.skipped;
        if (pr.hi_margin < hi) {
            hi = pr.hi_margin;
            rep.worst_density_probe = i;
        }
        if (pr.lo_margin < lo) {
            lo = pr.lo_margin;
            rep.worst_characteristic_probe = i;
        }
    }
    rep.saddle_lo = n_probes > 0 ? lo : 0.0;
    rep.saddle_hi = n_probes > 0 ? hi : 0.0;
    if (n_probes > 0 && rep.skipped == n_probes)
        throw NumericError("saddle audit could not draw any feasible density probe");
    if (!std::isfinite(rep.saddle_hi)) rep.saddle_hi = 0.0;
    if (!std::isfinite(rep.saddle_lo)) rep.saddle_lo = 0.0;
    return rep;
}

}  // namespace rstat
