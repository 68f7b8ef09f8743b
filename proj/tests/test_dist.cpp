#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "statgames/dist.hpp"
#include "statgames/errors.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace statgames;

namespace {

GameSpec fisher_spec(std::int64_t N, std::int64_t K_A, std::int64_t K_B, std::int64_t M) {
    GameSpec s;
    s.N = N;
    s.K_A = K_A;
    s.K_B = K_B;
    s.M = M;
    s.kind = GameKind::Fisher;
    return s;
}

double log_binom(std::int64_t n, std::int64_t k) {
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

// Independent floating-point route to the sampling probabilities: three
// factorial ratios through lgamma instead of exact integer binomials.
double hyper_pmf_ref(std::int64_t N, std::int64_t K, std::int64_t M, std::int64_t k) {
    if (k < 0 || k > K || N - k < 0 || N - k > M - K) return 0.0;
    return std::exp(log_binom(K, k) + log_binom(M - K, N - k) - log_binom(M, N));
}

GameSpec random_fisher_spec(std::mt19937_64& rng, std::int64_t max_M) {
    const std::int64_t M = 1 + std::int64_t(rng() % std::uint64_t(max_M));
    GameSpec s = fisher_spec(std::int64_t(rng() % std::uint64_t(M + 1)),
                             std::int64_t(rng() % std::uint64_t(M + 1)),
                             std::int64_t(rng() % std::uint64_t(M + 1)), M);
    return s;
}

// Expands prod_{i<N} ((1-x) + x t) one factor at a time; coefficient of t^k
// is the binomial pmf without calling any library pmf routine.
std::vector<double> binom_pmf_ref(std::int64_t N, double x) {
    std::vector<double> coeff{1.0};
    for (std::int64_t i = 0; i < N; ++i) {
        std::vector<double> next(coeff.size() + 1, 0.0);
        for (std::size_t j = 0; j < coeff.size(); ++j) {
            next[j] += coeff[j] * (1.0 - x);
            next[j + 1] += coeff[j] * x;
        }
        coeff = std::move(next);
    }
    return coeff;
}

} // namespace

TEST_CASE("hypergeometric pmfs match an independent factorial-ratio evaluation") {
    std::mt19937_64 rng(20240811);
    std::vector<GameSpec> specs = {fisher_spec(17, 10, 16, 27), fisher_spec(4, 2, 7, 11),
                                   fisher_spec(9, 9, 1, 9)};
    for (int i = 0; i < 40; ++i) specs.push_back(random_fisher_spec(rng, 60));

    for (const GameSpec& s : specs) {
        const ScenarioDistributions d = hypergeom_pmfs(s);
        for (std::int64_t k = 0; k <= s.N; ++k) {
            const double ref_A = hyper_pmf_ref(s.N, s.K_A, s.M, k);
            const double ref_B = hyper_pmf_ref(s.N, s.K_B, s.M, k);
            CHECK(to_double(d.pA(k)) == doctest::Approx(ref_A).epsilon(1e-12));
            CHECK(to_double(d.pB(k)) == doctest::Approx(ref_B).epsilon(1e-12));
        }
    }
}

TEST_CASE("pmfs normalize exactly and vanish exactly off the stated supports") {
    std::mt19937_64 rng(77002);
    for (int i = 0; i < 200; ++i) {
        const GameSpec s = random_fisher_spec(rng, 60);
        const ScenarioDistributions d = hypergeom_pmfs(s);

        Rational sum_A(0), sum_B(0);
        for (std::int64_t k = 0; k <= s.N; ++k) {
            sum_A += d.pA(k);
            sum_B += d.pB(k);
        }
        CHECK(sum_A == Rational(1));
        CHECK(sum_B == Rational(1));

        CHECK(d.support_A.lo == std::max<std::int64_t>(0, s.N - (s.M - s.K_A)));
        CHECK(d.support_A.hi == std::min(s.K_A, s.N));
        CHECK(d.support_B.lo == std::max<std::int64_t>(0, s.N - (s.M - s.K_B)));
        CHECK(d.support_B.hi == std::min(s.K_B, s.N));

        for (std::int64_t k = 0; k <= s.N; ++k) {
            CHECK((d.pA(k) > 0) == d.support_A.contains(k));
            CHECK((d.pB(k) > 0) == d.support_B.contains(k));
        }
    }
}

TEST_CASE("forced-sequence and full-sampling specs give the expected point masses") {
    const ScenarioDistributions d = hypergeom_pmfs(fisher_spec(1, 0, 1, 2));
    CHECK(d.pA(0) == Rational(1));
    CHECK(d.pA(1) == Rational(0));
    CHECK(d.pB(0) == Rational(1, 2));
    CHECK(d.pB(1) == Rational(1, 2));

    // Sampling every bit pins k at K exactly.
    const ScenarioDistributions full = hypergeom_pmfs(fisher_spec(3, 1, 2, 3));
    for (std::int64_t k = 0; k <= 3; ++k) {
        CHECK(full.pA(k) == Rational(k == 1 ? 1 : 0));
        CHECK(full.pB(k) == Rational(k == 2 ? 1 : 0));
    }
}

TEST_CASE("likelihood ratios increase along the shared support when K_A < K_B") {
    std::mt19937_64 rng(5150);
    int examined = 0;
    while (examined < 60) {
        GameSpec s = random_fisher_spec(rng, 40);
        if (s.K_A >= s.K_B) continue;
        const ScenarioDistributions d = hypergeom_pmfs(s);
        if (d.support_AB.size() < 2) continue;
        ++examined;
        for (std::int64_t k = d.support_AB.lo; k < d.support_AB.hi; ++k) {
            // Cross-multiplied form of p_{k+1}(B)/p_{k+1}(A) > p_k(B)/p_k(A).
            CHECK(d.pB(k + 1) * d.pA(k) > d.pB(k) * d.pA(k + 1));
        }
    }
}

TEST_CASE("classification separates blind, sure, and nontrivial games") {
    CHECK(classify(fisher_spec(1, 0, 0, 1)) == GameClass::BlindGuessing);
    CHECK(classify(fisher_spec(1, 0, 2, 2)) == GameClass::SureWinning);
    CHECK(classify(fisher_spec(1, 0, 1, 2)) == GameClass::Nontrivial);

    // Equal K or an empty sample can never separate the scenarios.
    CHECK(classify(fisher_spec(3, 4, 4, 8)) == GameClass::BlindGuessing);
    CHECK(classify(fisher_spec(0, 1, 5, 6)) == GameClass::BlindGuessing);

    // Disjoint supports mean the count k reveals the scenario with certainty.
    std::mt19937_64 rng(424242);
    for (int i = 0; i < 200; ++i) {
        const GameSpec s = random_fisher_spec(rng, 30);
        const ScenarioDistributions d = hypergeom_pmfs(s);
        const GameClass c = classify(s);
        if (s.K_A == s.K_B || s.N == 0)
            CHECK(c == GameClass::BlindGuessing);
        else if (d.support_AB.empty())
            CHECK(c == GameClass::SureWinning);
        else
            CHECK(c == GameClass::Nontrivial);
    }

    CHECK(std::string(to_string(GameClass::BlindGuessing)) == "blind-guessing");
    CHECK(std::string(to_string(GameClass::SureWinning)) == "sure-winning");
    CHECK(std::string(to_string(GameClass::Nontrivial)) == "nontrivial");
}

TEST_CASE("canonical form swaps oversized K_A and records the exchange") {
    const GameSpec c = fisher_spec(1, 2, 1, 3).canonical();
    CHECK(c.K_A == 1);
    CHECK(c.K_B == 2);
    CHECK(c.swapped);

    const GameSpec again = c.canonical();
    CHECK(again.K_A == c.K_A);
    CHECK(again.K_B == c.K_B);
    CHECK(again.swapped == c.swapped);

    const GameSpec untouched = fisher_spec(1, 1, 2, 3).canonical();
    CHECK(untouched.K_A == 1);
    CHECK(untouched.K_B == 2);
    CHECK(!untouched.swapped);
}

TEST_CASE("spec validation rejects out-of-range parameters") {
    CHECK_THROWS_AS(fisher_spec(3, 0, 0, 2).validate(), InvalidSpec);
    CHECK_THROWS_AS(fisher_spec(1, 3, 0, 2).validate(), InvalidSpec);
    CHECK_THROWS_AS(fisher_spec(1, 0, 3, 2).validate(), InvalidSpec);
    CHECK_THROWS_AS(fisher_spec(0, 0, 0, -1).validate(), InvalidSpec);
    CHECK_THROWS_AS(fisher_spec(-1, 0, 0, 1).validate(), InvalidSpec);

    GameSpec stray_gamma = fisher_spec(1, 0, 1, 2);
    stray_gamma.gamma = 2.0;
    CHECK_THROWS_AS(stray_gamma.validate(), InvalidSpec);

    GameSpec missing_gamma = fisher_spec(1, 0, 1, 2);
    missing_gamma.kind = GameKind::Statistical;
    CHECK_THROWS_AS(missing_gamma.validate(), InvalidSpec);

    missing_gamma.gamma = 0.0;
    CHECK_THROWS_AS(missing_gamma.validate(), InvalidSpec);
    missing_gamma.gamma = -1.0;
    CHECK_THROWS_AS(missing_gamma.validate(), InvalidSpec);

    missing_gamma.gamma = 2.0;
    CHECK_NOTHROW(missing_gamma.validate());
}

TEST_CASE("action counts follow the closed-form set sizes") {
    const ActionCounts tiny = action_counts(fisher_spec(1, 0, 1, 2));
    CHECK(tiny.sequences == 3);
    CHECK(tiny.sample_policies == 8);

    // An empty sample leaves exactly the two blind guesses.
    CHECK(action_counts(fisher_spec(0, 0, 0, 1)).sample_policies == 2);

    // (2,1,2,4): supports are [0,1] and [0,2], overlap [0,1], union [0,2].
    const ActionCounts c = action_counts(fisher_spec(2, 1, 2, 4));
    CHECK(c.sequences == 10);                 // C(4,1) + C(4,2)
    CHECK(c.sample_policies == 96);           // C(4,2) * 2^(2^2)
    CHECK(c.policies_feasible == 16);         // 2^(C(2,0)+C(2,1)+C(2,2))
    CHECK(c.policies_nondominated == 8);      // 2^(C(2,0)+C(2,1))
    CHECK(c.invariant_policies == 8);         // 2^(N+1)
    CHECK(c.invariant_feasible == 8);         // 2^|union|
    CHECK(c.invariant_nondominated == 4);     // 2^|overlap|

    CHECK_THROWS_AS(action_counts(fisher_spec(27, 5, 6, 27)), TooLarge);
}

TEST_CASE("binomial pmfs expand the product form") {
    const PmfPair even = binom_pmfs(1, 0.5, 0.5);
    CHECK(even.pA(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(even.pA(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(even.pB(0) == doctest::Approx(0.5).epsilon(1e-15));

    const PmfPair thirds = binom_pmfs(2, 1.0 / 3.0, 2.0 / 3.0);
    CHECK(thirds.pA(0) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    CHECK(thirds.pA(1) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    CHECK(thirds.pA(2) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

    const PmfPair p = binom_pmfs(6, 0.2, 0.7);
    const std::vector<double> ref_A = binom_pmf_ref(6, 0.2);
    const std::vector<double> ref_B = binom_pmf_ref(6, 0.7);
    double sum_A = 0.0, sum_B = 0.0;
    for (std::int64_t k = 0; k <= 6; ++k) {
        CHECK(p.pA(k) == doctest::Approx(ref_A[std::size_t(k)]).epsilon(1e-13));
        CHECK(p.pB(k) == doctest::Approx(ref_B[std::size_t(k)]).epsilon(1e-13));
        sum_A += p.pA(k);
        sum_B += p.pB(k);
    }
    CHECK(std::abs(sum_A - 1.0) < 1e-12);
    CHECK(std::abs(sum_B - 1.0) < 1e-12);
    CHECK(p.support_A.lo == 0);
    CHECK(p.support_A.hi == 6);
    CHECK(p.support_AB.size() == 7);

    CHECK_THROWS_AS(binom_pmfs(3, 0.0, 0.5), InvalidFraction);
    CHECK_THROWS_AS(binom_pmfs(3, 0.5, 1.0), InvalidFraction);
    CHECK_THROWS_AS(binom_pmfs(3, -0.2, 0.5), InvalidFraction);
}

TEST_CASE("sampling without replacement approaches the binomial limit") {
    // A single draw is exactly Bernoulli.
    CHECK(tv_distance_hyper_binom(fisher_spec(1, 1, 1, 2), Scenario::A) == 0.0);

    const double mid = tv_distance_hyper_binom(fisher_spec(4, 5, 5, 10), Scenario::A);
    CHECK(mid >= 3.0 / 252.0);
    CHECK(mid <= 3.0 / 9.0);

    const double large = tv_distance_hyper_binom(fisher_spec(4, 40, 40, 100), Scenario::A);
    CHECK(large <= 3.0 / 99.0);

    // Fixed N and marked-bit rate, growing M: the distance shrinks.
    CHECK(large < mid);
    double prev = 1.0;
    for (std::int64_t scale = 1; scale <= 8; scale *= 2) {
        const double tv =
            tv_distance_hyper_binom(fisher_spec(4, 2 * 5 * scale, 2 * 5 * scale, 5 * 10 * scale),
                                    Scenario::A);
        CHECK(tv <= 3.0 / double(5 * 10 * scale - 1));
        CHECK(tv < prev);
        prev = tv;
    }

    // Degenerate scenario: all-unmarked sequences sample k = 0 with certainty.
    CHECK(tv_distance_hyper_binom(fisher_spec(2, 0, 0, 5), Scenario::A) == 0.0);
}

TEST_CASE("rational pmfs cast to floats consistently") {
    const ScenarioDistributions d = hypergeom_pmfs(fisher_spec(5, 3, 7, 12));
    const PmfPair p = to_pmf_pair(d);
    CHECK(p.N == 5);
    CHECK(p.support_A.lo == d.support_A.lo);
    CHECK(p.support_B.hi == d.support_B.hi);
    for (std::int64_t k = 0; k <= 5; ++k) {
        CHECK(p.pA(k) == to_double(d.pA(k)));
        CHECK(p.pB(k) == to_double(d.pB(k)));
    }
}
