#pragma once

#include "statgames/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace statgames {

enum class GameKind { Fisher, Bayesian, Statistical };
enum class GameClass { BlindGuessing, SureWinning, Nontrivial };
enum class Scenario { A, B };

// Parameters of a guessing/betting game: the chooser commits to a binary
// sequence of length M containing K_A or K_B marked bits depending on the
// scenario she picks; the guesser samples N bits without replacement.
struct GameSpec {
    std::int64_t N = 0;
    std::int64_t K_A = 0;
    std::int64_t K_B = 0;
    std::int64_t M = 0;
    GameKind kind = GameKind::Fisher;
    std::optional<double> gamma; // relative risk aversion; Statistical games only
    bool swapped = false;        // set by canonical() when scenario labels were exchanged

    void validate() const; // throws InvalidSpec
    // K_A <= K_B convention; when the labels get exchanged the result carries
    // swapped = true so reported quantities can be re-labelled by the caller.
    GameSpec canonical() const;
};

// Contiguous integer interval [lo, hi]; empty iff hi < lo.
struct SupportInterval {
    std::int64_t lo = 0;
    std::int64_t hi = -1;

    bool empty() const { return hi < lo; }
    std::int64_t size() const { return empty() ? 0 : hi - lo + 1; }
    bool contains(std::int64_t k) const { return k >= lo && k <= hi; }
};

SupportInterval intersect(const SupportInterval& a, const SupportInterval& b);

// Exact sampling distributions of k (number of marked bits in the sample),
// one hypergeometric pmf per scenario.
struct ScenarioDistributions {
    GameSpec spec;
    SupportInterval support_A, support_B, support_AB, support_union;
    std::vector<Rational> pmf_A, pmf_B; // dense, index k = 0..N; zero outside support

    const Rational& pA(std::int64_t k) const { return pmf_A[static_cast<std::size_t>(k)]; }
    const Rational& pB(std::int64_t k) const { return pmf_B[static_cast<std::size_t>(k)]; }
};

// Exact rational pmfs; guards M <= 10^4 so the big-integer binomials stay sane.
// Does not canonicalize: pmf_A always belongs to the scenario labelled A in `spec`.
ScenarioDistributions hypergeom_pmfs(const GameSpec& spec);

// BlindGuessing: identical sampling distributions (K_A == K_B or N == 0).
// SureWinning: the two supports are disjoint, so the sample reveals the scenario.
// Nontrivial: everything else (threshold equilibrium territory).
GameClass classify(const GameSpec& spec);

const char* to_string(GameClass c);
const char* to_string(GameKind k);

// Cardinalities of the action sets and of the standard policy-set reductions.
struct ActionCounts {
    BigInt sequences;              // chooser: C(M,K_A) + C(M,K_B)
    BigInt sample_policies;        // guesser: C(M,N) * 2^(2^N), sampling x sample->guess map
    BigInt policies_feasible;      // guess maps restricted to samples reachable in some scenario
    BigInt policies_nondominated;  // additionally forced where only one scenario is possible
    BigInt invariant_policies;     // count-based guess maps on k = 0..N
    BigInt invariant_feasible;     // count-based maps on the reachable counts
    BigInt invariant_nondominated; // count-based maps free only on the support overlap
};

// The three sample-indexed counts explode doubly-exponentially; N > 26 throws
// TooLarge (the count itself would need gigabytes). Count-based ones always fit.
ActionCounts action_counts(const GameSpec& spec);

// Floating-point pmf pair: common input shape for solvers that accept both
// exact finite games (via to_pmf_pair) and binomial limit games.
struct PmfPair {
    std::vector<double> pmf_A, pmf_B; // dense, index k = 0..N
    SupportInterval support_A, support_B, support_AB, support_union;
    std::int64_t N = 0;

    double pA(std::int64_t k) const { return pmf_A[static_cast<std::size_t>(k)]; }
    double pB(std::int64_t k) const { return pmf_B[static_cast<std::size_t>(k)]; }
};

PmfPair to_pmf_pair(const ScenarioDistributions& d);

// Binomial sampling distributions with marked-bit rates x_A, x_B; the M -> inf
// limit of the hypergeometric model at fixed K/M. Rates outside the open unit
// interval throw InvalidFraction.
PmfPair binom_pmfs(std::int64_t N, double x_A, double x_B);

// Total variation distance between the exact sampling pmf of `which` and its
// binomial approximation with x = K/M. Checks the theoretical sandwich
// (N-1)/(28(M-1)) <= TV <= (N-1)/(M-1); the lower bound applies only for
// 0 < K < M and N >= 2 (degenerate scenarios give TV = 0 exactly). A violation
// would falsify the bound itself, hence std::logic_error.
double tv_distance_hyper_binom(const GameSpec& spec, Scenario which);

} // namespace statgames
