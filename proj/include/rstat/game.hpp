#ifndef RSTAT_GAME_HPP
#define RSTAT_GAME_HPP

#include <optional>

#include "rstat/coeffs.hpp"
#include "rstat/operators.hpp"
#include "rstat/spectra.hpp"

namespace rstat {

/// Saddle value and least favourable sequence of the two-person zero-sum
/// estimation game over sequences with power E|xi(j)|^2 <= P: the adversary
/// plays a one-sided moving average built from the top eigenvector of the
/// game matrix, the estimator learns only the innovations it can observe.
struct GameSolution {
    double value = 0.0;                  // P * (top eigenvalue)
    std::vector<Complex> phi;            // scaled so sum |phi(u)|^2 = P
    Factorization least_favourable;      // moving-average coefficients = phi
    std::vector<Complex> estimate_coeffs;  // weight of epsilon(-m) in the optimal estimate, m>=1
    double tail_bound = 0.0;             // truncation certificate for infinite functionals
};

GameSolution solve_game(const CoefSeq& a, double power, Eigen::Index order);

}  // namespace rstat

#endif
