#include "rstat/game.hpp"

#include <cmath>

#include "rstat/errors.hpp"

namespace rstat {

GameSolution solve_game(const CoefSeq& a, double power, Eigen::Index order) {
    if (!(power > 0.0)) throw InvalidInputError("power bound must be positive");
    if (order <= 0) throw InvalidInputError("game order must be positive");

    GameSolution sol;

    double norm_a = 0.0;
    for (const Complex& v : a.coeffs()) norm_a = std::max(norm_a, std::abs(v));
    if (norm_a == 0.0) {
        // degenerate functional: the game is worthless for both players
        sol.least_favourable.d = {Complex(0.0, 0.0)};
        return sol;
    }

    if (!a.is_finite()) {
        const std::uint32_t needed = a.required_truncation(kTailCertificateRel);
        if (a.size() < needed)
            throw NumericError("functional tail certificate failed: truncation " +
                               std::to_string(a.size()) + " insufficient, need " +
                               std::to_string(needed));
        sol.tail_bound = a.tail_weighted_energy();
    }

    const HermitianMatrix q = build_game_matrix(a.coeffs(), order);
    const EigenPair top = top_eigenpair(q);

    sol.value = power * top.value;
    const double scale = std::sqrt(power);
    sol.phi.resize(static_cast<std::size_t>(top.vector.size()));
    for (Eigen::Index i = 0; i < top.vector.size(); ++i)
        sol.phi[static_cast<std::size_t>(i)] = scale * top.vector(i);

    sol.least_favourable.d = sol.phi;
    sol.least_favourable.geometric_mean = std::norm(sol.phi.front());
    sol.least_favourable.residual = 0.0;

    // hat{A} xi = sum_j a(j) sum_{u=j-N..-1} phi(j-u) eps(u); the weight of
    // eps(-m) is sum_j a(j) phi(j+m).
    const std::size_t n = sol.phi.size();
    sol.estimate_coeffs.assign(n, Complex(0.0, 0.0));
    for (std::size_t m = 1; m <= n; ++m) {
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j + m < n; ++j) acc += a.at(static_cast<std::uint32_t>(j)) * sol.phi[j + m];
        sol.estimate_coeffs[m - 1] = acc;
    }
    while (!sol.estimate_coeffs.empty() && std::abs(sol.estimate_coeffs.back()) == 0.0)
        sol.estimate_coeffs.pop_back();
    return sol;
}

}  // namespace rstat
