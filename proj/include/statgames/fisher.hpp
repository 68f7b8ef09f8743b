#pragma once

#include "statgames/dist.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>

namespace statgames {

// Equilibrium of a win/lose guessing game. The guesser plays a count threshold:
// guess A below k_star, guess B above it, and randomize nu_star : 1-nu_star at
// k_star; the chooser plays scenario A with probability P_star.
template <class Scalar>
struct ThresholdEquilibrium {
    GameClass game_class = GameClass::Nontrivial;
    bool swapped = false;               // quantities refer to the relabelled game
    std::optional<std::int64_t> k_star; // threshold count
    std::optional<Scalar> nu_star;      // P(guess A | k == k_star), in [0,1)
    std::optional<Scalar> P_star;       // chooser's scenario-A probability
    Scalar v_star{};                    // guesser's winning rate (game value)
    std::optional<Scalar> s_star;       // (k_star + nu_star) / (N+1)
    // Present when nu_star == 0: the equilibrium prior is then any point of
    // this closed interval; P_star holds its midpoint as the canonical pick.
    std::optional<std::pair<Scalar, Scalar>> prior_interval;
};

using FisherEquilibrium = ThresholdEquilibrium<Rational>;
using BinomialFisherEquilibrium = ThresholdEquilibrium<double>;

// Exact equilibrium. BlindGuessing games collapse to a coin flip (P* = v* = 1/2,
// no threshold); SureWinning games have v* = 1 and no equilibrium prior.
FisherEquilibrium solve_fisher(const GameSpec& spec);

// Winning rate of the best threshold strategy pinned at each overlap count k:
// the chooser-indifferent mix where that mix is a valid probability (exactly
// the equilibrium threshold), the plain cutoff otherwise. The unique argmax is
// k_star and the maximum is v_star. Nontrivial games only.
std::map<std::int64_t, Rational> winning_rate_curve(const GameSpec& spec);

// Smallest strong medians of the two sampling distributions (a strong median c
// has P(X <= c) >= 1/2 and P(X >= c) >= 1/2). For Nontrivial games they
// bracket the equilibrium threshold, up to the boundary-mixing convention.
struct MedianBounds {
    std::int64_t median_A = 0;
    std::int64_t median_B = 0;
};
MedianBounds median_bounds(const GameSpec& spec);

// Binomial-sampling limit at fixed rates 0 < x_A, x_B < 1 (x_A == x_B is the
// blind game; x_A > x_B is solved with labels exchanged and flagged). Mixing
// weights within scar_tol of zero are treated as the degenerate case: the
// prior interval is reported and its midpoint becomes the canonical P_star.
BinomialFisherEquilibrium binomial_fisher(std::int64_t N, double x_A, double x_B,
                                          double scar_tol = 1e-12);

} // namespace statgames
