#pragma once

#include "statgames/bayes.hpp"
#include "statgames/dist.hpp"
#include "statgames/fisher.hpp"
#include "statgames/iso.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace statgames {

// Brute-force enumeration and Nash certification for small games. Everything
// the closed-form solvers claim is re-derived here from the raw action sets,
// with exact rational arithmetic wherever the utilities are rational.

enum class PolicyMode {
    Reduced,  // count-based guess maps, free only on the support overlap
    Full      // every map from observed sample pattern to guess (explodes fast)
};

// The game seen as a plain matrix: one row per guesser pure action, one
// column per chooser pure action.
//
// Rows are ordered sampling-major: row = sampling_index * policies() +
// policy_index. A policy is encoded in the bits of its index over
// policy_domain: bit j set means "guess B" on policy_domain[j] (a count in
// Reduced mode, an observed bit-pattern in Full mode); observations outside
// the domain force the only undominated guess. Capital-splitting games use
// base-(grid size) digits instead of bits, with split_grid[digit] placed on
// scenario A.
struct UtilityMatrix {
    GameSpec spec;  // canonical form the enumeration ran on
    PolicyMode mode = PolicyMode::Reduced;
    std::vector<std::vector<std::int64_t>> samplings;  // sorted position sets
    std::vector<std::int64_t> policy_domain;
    std::vector<Rational> split_grid;  // empty for win/lose games
    std::vector<std::pair<Scenario, std::vector<bool>>> columns;
    std::vector<std::vector<Rational>> u;  // guesser's utility, rows x columns

    std::int64_t rows() const { return static_cast<std::int64_t>(u.size()); }
    std::int64_t cols() const { return static_cast<std::int64_t>(columns.size()); }
    std::int64_t policies() const {
        return samplings.empty() ? 0 : rows() / static_cast<std::int64_t>(samplings.size());
    }
};

// Exact utility matrix of a small game. Win/lose games get 0/1 entries; the
// splitting variants are enumerable only where the utility of a rational
// capital is itself rational, i.e. integer risk aversion >= 2 on a fixed
// split grid of step 1/64 (log utility is transcendental: DomainError).
// Guards: C(M,K_A)+C(M,K_B) <= 10^6 columns, 10^6 rows, 2*10^7 entries;
// beyond any of these throws TooLarge.
UtilityMatrix enumerate_game(const GameSpec& spec, PolicyMode mode = PolicyMode::Reduced);

// Outcome of checking a claimed equilibrium against the enumerated game.
// Gaps measure the worst violation found: how much any guesser action gains
// over the claimed value, and how far any chooser action strays from it.
// Certification throws Refuted instead of returning a bad certificate, so
// nash_ok is true on every object that escapes the functions below.
struct Certificate {
    bool exact = false;  // rational pipeline (win/lose games)
    bool nash_ok = false;
    Rational value_exact;  // set when exact
    double value = 0.0;    // always set
    Rational row_gap_exact, col_gap_exact;  // set when exact
    double worst_row_gap = 0.0;
    double worst_col_gap = 0.0;
};

// Checks the threshold equilibrium of a win/lose game against the enumerated
// matrix: equal expected rate on every supported guesser action, no excluded
// action doing better, and chooser indifference across all sequences. All
// comparisons are exact. Nontrivial games only.
Certificate verify_fisher(const GameSpec& spec, const FisherEquilibrium& eq);

// Checks a log-utility equilibrium: reported splits match the posterior
// best response at P* (tol 1e-10), no prior on a `grid`-point scan improves
// on P* beyond curvature times the certified error bound, the two scenarios
// are indifferent at the equilibrium, and no split on the 1/64 grid beats
// the closed form. Float arithmetic with stated tolerances.
Certificate verify_bayes(const GameSpec& spec, const BettingEquilibrium& eq, int grid = 201);

// Same checks for isoelastic utility at the equilibrium's gamma.
Certificate verify_iso(const GameSpec& spec, const IsoEquilibrium& eq, int grid = 201);

// Certifies the value of a win/lose game without a general LP: the best
// response to the chooser's equilibrium mix and the best response to the
// guesser's equilibrium mix must meet at the same number. Works for all
// three game classes; throws Refuted if the two sides disagree.
Rational game_value_lp_free(const GameSpec& spec);

}  // namespace statgames
