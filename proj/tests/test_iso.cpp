#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "statgames/bayes.hpp"
#include "statgames/dist.hpp"
#include "statgames/errors.hpp"
#include "statgames/iso.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace statgames;

namespace {

GameSpec iso_spec(std::int64_t N, std::int64_t K_A, std::int64_t K_B, std::int64_t M,
                  double gamma) {
    GameSpec s;
    s.N = N;
    s.K_A = K_A;
    s.K_B = K_B;
    s.M = M;
    s.kind = GameKind::Statistical;
    s.gamma = gamma;
    return s;
}

double power_utility(double c, double gamma) {
    return (std::pow(c, 1.0 - gamma) - 1.0) / (1.0 - gamma);
}

// Guesser's best-response expected utility at prior P, assembled from scratch:
// the optimal share after seeing k solves (s/(1-s))^gamma = w/(1-w) for the
// posterior w, and counts occurring under one scenario only contribute zero.
double best_response_utility(const PmfPair& d, double P, double gamma) {
    double total = 0.0;
    for (std::int64_t k = 0; k <= d.N; ++k) {
        const double ma = P * d.pA(k);
        const double mb = (1.0 - P) * d.pB(k);
        if (ma + mb <= 0.0) continue;
        const double w = ma / (ma + mb);
        if (w <= 0.0 || w >= 1.0) continue;
        const double s = 1.0 / (1.0 + std::pow((1.0 - w) / w, 1.0 / gamma));
        total += (ma + mb) * (w * power_utility(s, gamma) +
                              (1.0 - w) * power_utility(1.0 - s, gamma));
    }
    return total;
}

// Golden-section minimum of the convex best-response utility over the prior.
double oracle_prior(const PmfPair& d, double gamma) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 1e-9, hi = 1.0 - 1e-9;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = best_response_utility(d, x1, gamma);
    double f2 = best_response_utility(d, x2, gamma);
    for (int i = 0; i < 200; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = best_response_utility(d, x1, gamma);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = best_response_utility(d, x2, gamma);
        }
    }
    return (lo + hi) / 2.0;
}

} // namespace

TEST_CASE("the smallest game has closed-form priors at three risk aversions") {
    const PmfPair d = to_pmf_pair(hypergeom_pmfs(iso_spec(1, 0, 1, 2, 2.0)));

    const IsoEquilibrium half = solve_iso(iso_spec(1, 0, 1, 2, 0.5), 0.5);
    CHECK(std::abs(*half.P_star - 0.4) < 1e-9);
    CHECK(std::abs(oracle_prior(d, 0.5) - 0.4) < 1e-6);

    const IsoEquilibrium two = solve_iso(iso_spec(1, 0, 1, 2, 2.0), 2.0);
    CHECK(std::abs(*two.P_star - 0.5) < 1e-9);
    CHECK(std::abs(oracle_prior(d, 2.0) - 0.5) < 1e-6);

    const double root = (3.0 + std::pow(12.0, 0.25) - std::sqrt(3.0)) / 6.0;
    const IsoEquilibrium three = solve_iso(iso_spec(1, 0, 1, 2, 3.0), 3.0);
    CHECK(std::abs(*three.P_star - root) < 1e-9);
    CHECK(std::abs(oracle_prior(d, 3.0) - root) < 1e-6);

    // k = 1 only occurs under scenario B, so that split is forced.
    CHECK(three.split(1) == 0.0);
    CHECK(*three.theta_star ==
          doctest::Approx(std::log(*three.P_star / (1.0 - *three.P_star))).epsilon(1e-12));
}

TEST_CASE("extreme risk aversions approach the known limits") {
    const IsoEquilibrium tiny = solve_iso(iso_spec(1, 0, 1, 2, 1e-3), 1e-3);
    CHECK(std::abs(*tiny.P_star - 1.0 / 3.0) < 1e-3);
    CHECK(std::abs(tiny.split(0) - 2.0 / 3.0) < 1e-3);

    const IsoEquilibrium huge = solve_iso(iso_spec(1, 0, 1, 2, 1e3), 1e3);
    CHECK(std::abs(*huge.P_star - 0.5) < 1e-3);
}

TEST_CASE("the prior interpolates monotonically between the two limits") {
    double prev = 1.0 / 3.0;
    for (double gamma : {0.01, 0.1, 0.5, 1.0, 2.0}) {
        const IsoEquilibrium eq = solve_iso(iso_spec(1, 0, 1, 2, gamma), gamma);
        CHECK(*eq.P_star > prev);
        CHECK(*eq.P_star <= 0.5 + 1e-12);
        prev = *eq.P_star;
    }

    double prev_split = 2.0 / 3.0;
    for (double gamma : {0.01, 0.1, 0.5, 1.0, 2.0, 8.0, 64.0}) {
        const IsoEquilibrium eq = solve_iso(iso_spec(1, 0, 1, 2, gamma), gamma);
        CHECK(eq.split(0) < prev_split);
        CHECK(eq.split(0) > 0.5);
        prev_split = eq.split(0);
    }
}

TEST_CASE("unit risk aversion delegates to the logarithmic solver") {
    const IsoEquilibrium iso = solve_iso(iso_spec(1, 0, 1, 2, 1.0), 1.0);
    const BettingEquilibrium log_eq = solve_bayes(
        [] {
            GameSpec s;
            s.N = 1;
            s.K_A = 0;
            s.K_B = 1;
            s.M = 2;
            s.kind = GameKind::Bayesian;
            return s;
        }());
    CHECK(*iso.P_star == doctest::Approx(*log_eq.P_star).epsilon(1e-12));
    CHECK(iso.split(0) == doctest::Approx(log_eq.split(0)).epsilon(1e-12));

    // Continuity across the delegated point.
    const IsoEquilibrium below = solve_iso(iso_spec(1, 0, 1, 2, 1.0 - 1e-6), 1.0 - 1e-6);
    const IsoEquilibrium above = solve_iso(iso_spec(1, 0, 1, 2, 1.0 + 1e-6), 1.0 + 1e-6);
    CHECK(std::abs(*below.P_star - *iso.P_star) < 1e-4);
    CHECK(std::abs(*above.P_star - *iso.P_star) < 1e-4);
}

TEST_CASE("the fixed-point map contracts at the hyperbolic-tangent rate") {
    // Supports coincide here: both scenarios can produce any count in [0,2].
    const PmfPair d = to_pmf_pair(hypergeom_pmfs(iso_spec(2, 2, 3, 6, 2.0)));
    REQUIRE(d.support_A.lo == d.support_B.lo);
    REQUIRE(d.support_A.hi == d.support_B.hi);

    double r_min = 1e300, r_max = -1e300;
    for (std::int64_t k = d.support_A.lo; k <= d.support_A.hi; ++k) {
        const double r = std::log(d.pA(k) / d.pB(k));
        r_min = std::min(r_min, r);
        r_max = std::max(r_max, r);
    }
    const double lambda_bar = (r_max - r_min) / 2.0;

    std::mt19937_64 rng(998877);
    for (double gamma : {0.5, 2.0, 3.0, 10.0}) {
        const IsoLogOddsMap Phi(d, gamma);
        CHECK(Phi.lambda_bar() == doctest::Approx(lambda_bar).epsilon(1e-12));
        CHECK(Phi.contraction_bound() ==
              doctest::Approx(std::tanh(lambda_bar / (2.0 * gamma))).epsilon(1e-12));
        CHECK(Phi.contraction_bound() < 1.0);

        for (int p = 0; p < 250; ++p) {
            const double t1 = -20.0 + 40.0 * (double(rng() % 100000) / 100000.0);
            const double t2 = -20.0 + 40.0 * (double(rng() % 100000) / 100000.0);
            if (t1 == t2) continue;
            CHECK(std::abs(Phi(t1) - Phi(t2)) <=
                  Phi.contraction_bound() * std::abs(t1 - t2) + 1e-13);
        }
    }

    const PmfPair uneven = to_pmf_pair(hypergeom_pmfs(iso_spec(1, 0, 1, 2, 2.0)));
    CHECK_THROWS_AS(IsoLogOddsMap(uneven, 2.0), SupportMismatch);
    CHECK_THROWS_AS(IsoLogOddsMap(d, 1.0), DomainError);

    // The solver surfaces the same bound exactly when the map applies.
    const IsoEquilibrium matched = solve_iso(iso_spec(2, 2, 3, 6, 2.0), 2.0);
    REQUIRE(matched.contraction_bound.has_value());
    CHECK(*matched.contraction_bound ==
          doctest::Approx(std::tanh(lambda_bar / 4.0)).epsilon(1e-12));
    const IsoEquilibrium mismatched = solve_iso(iso_spec(1, 0, 1, 2, 2.0), 2.0);
    CHECK(!mismatched.contraction_bound.has_value());
}

TEST_CASE("power utility satisfies the textbook identities") {
    for (double c : {0.1, 0.4, 0.9, 1.0}) {
        CHECK(isoelastic_utility(c, 1.0) == doctest::Approx(std::log(c)).epsilon(1e-14));
        CHECK(isoelastic_utility(c, 1.0 + 1e-9) == doctest::Approx(std::log(c)).epsilon(1e-6));
        CHECK(isoelastic_utility(c, 1.0 - 1e-9) == doctest::Approx(std::log(c)).epsilon(1e-6));
        CHECK(isoelastic_utility(c, 2.0) == doctest::Approx(1.0 - 1.0 / c).epsilon(1e-14));
    }
    CHECK(isoelastic_utility(1.0, 0.5) == 0.0);
    CHECK(isoelastic_utility(1.0, 7.0) == 0.0);
    CHECK(isoelastic_utility(0.0, 1.0) == -std::numeric_limits<double>::infinity());
    CHECK(isoelastic_utility(0.0, 3.0) == -std::numeric_limits<double>::infinity());
    CHECK(isoelastic_utility(0.0, 0.5) == doctest::Approx(-2.0).epsilon(1e-14));

    // The argument is a retained fraction, so values beyond 1 are rejected.
    CHECK_THROWS_AS(isoelastic_utility(1.7, 2.0), DomainError);
    CHECK_THROWS_AS(isoelastic_utility(-0.1, 2.0), DomainError);
}

TEST_CASE("expected utility is convex in the prior and mirrors its entropy") {
    std::mt19937_64 rng(7141);
    for (int i = 0; i < 30; ++i) {
        const std::int64_t M = 2 + std::int64_t(rng() % 18);
        GameSpec s = iso_spec(1 + std::int64_t(rng() % std::uint64_t(M)),
                              std::int64_t(rng() % std::uint64_t(M + 1)),
                              std::int64_t(rng() % std::uint64_t(M + 1)), M, 2.0);
        if (classify(s) != GameClass::Nontrivial) continue;
        const PmfPair d = to_pmf_pair(hypergeom_pmfs(s));
        const double gamma = 0.25 + 3.0 * (double(rng() % 1000) / 1000.0);

        const double P1 = 0.05 + 0.4 * (double(rng() % 1000) / 1000.0);
        const double P2 = 0.55 + 0.4 * (double(rng() % 1000) / 1000.0);
        const double mid = expected_utility(d, (P1 + P2) / 2.0, gamma);
        CHECK(mid <= (expected_utility(d, P1, gamma) + expected_utility(d, P2, gamma)) / 2.0 +
                         1e-12);

        for (double P : {P1, P2}) {
            CHECK(expected_utility(d, P, gamma) ==
                  doctest::Approx(-conditional_entropy_eu(d, P, gamma)).epsilon(1e-12));
            CHECK(expected_utility(d, P, gamma) ==
                  doctest::Approx(best_response_utility(d, P, gamma)).epsilon(1e-10));
        }
    }
}

TEST_CASE("degenerate classes report the forced utilities") {
    const IsoEquilibrium sure = solve_iso(iso_spec(1, 0, 2, 2, 3.0), 3.0);
    CHECK(sure.game_class == GameClass::SureWinning);
    CHECK(sure.U_star == 0.0);
    CHECK(sure.split(0) == 1.0);
    CHECK(sure.split(1) == 0.0);
    CHECK(!sure.P_star.has_value());

    const IsoEquilibrium blind = solve_iso(iso_spec(1, 1, 1, 3, 3.0), 3.0);
    CHECK(blind.game_class == GameClass::BlindGuessing);
    CHECK(blind.U_star == doctest::Approx(-1.5).epsilon(1e-14)); // u_3(1/2) = -3/2
    CHECK(*blind.P_star == 0.5);
    for (std::int64_t k = blind.split_support.lo; k <= blind.split_support.hi; ++k)
        CHECK(blind.split(k) == 0.5);
}

TEST_CASE("vanishing risk aversion recovers the win/lose equilibrium") {
    const UnificationReport r = gamma_to_zero_check(iso_spec(1, 0, 1, 2, 0.5));
    CHECK(r.P_fisher == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.nu_star == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.theta_fisher == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
    CHECK(r.dev_P < 1e-3);
    CHECK(r.dev_split < 1e-3);
    CHECK(r.slope_expected == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(r.slope_fitted == doctest::Approx(r.slope_expected).epsilon(0.01));

    REQUIRE(r.gammas.size() == 3);
    CHECK(r.gammas[0] > r.gammas[1]);
    CHECK(r.gammas[1] > r.gammas[2]);
    // The deviation shrinks along the grid.
    CHECK(std::abs(r.P_gamma[2] - r.P_fisher) < std::abs(r.P_gamma[0] - r.P_fisher));
}

TEST_CASE("generalized entropies take their closed forms on uniform vectors") {
    for (std::size_t n : {2u, 3u, 7u}) {
        const std::vector<double> p(n, 1.0 / double(n));
        for (double alpha : {0.5, 2.0, 5.0})
            CHECK(entropy_renyi(p, alpha) == doctest::Approx(std::log(double(n))).epsilon(1e-12));
        CHECK(entropy_renyi(p, 1.0) == doctest::Approx(std::log(double(n))).epsilon(1e-12));
        for (double q : {0.5, 2.0, 3.0})
            CHECK(entropy_tsallis(p, q) ==
                  doctest::Approx((1.0 - std::pow(double(n), 1.0 - q)) / (q - 1.0))
                      .epsilon(1e-12));
        CHECK(entropy_tsallis(p, 1.0) == doctest::Approx(std::log(double(n))).epsilon(1e-12));
        CHECK(entropy_eu(p, 1.0) == doctest::Approx(std::log(double(n))).epsilon(1e-12));
    }

    // Away from order one the expected-utility entropy has its own closed form
    // on uniform vectors: (1 - n^(gamma-1))/(1 - gamma).
    const std::vector<double> u3(3, 1.0 / 3.0);
    for (double gamma : {0.5, 2.0, 4.0})
        CHECK(entropy_eu(u3, gamma) ==
              doctest::Approx((1.0 - std::pow(3.0, gamma - 1.0)) / (1.0 - gamma)).epsilon(1e-12));
}

TEST_CASE("the expected-utility divergence generalizes Kullback-Leibler") {
    const std::vector<double> p = {0.6, 0.3, 0.1};
    const std::vector<double> q = {0.2, 0.5, 0.3};

    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) kl += p[i] * std::log(p[i] / q[i]);
    CHECK(divergence_eu(p, q, 1.0) == doctest::Approx(kl).epsilon(1e-12));

    for (double gamma : {0.5, 0.8, 2.0, 5.0}) {
        const double alpha = 1.0 / gamma;
        double sum = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            sum += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
        const double renyi = std::log(sum) / (alpha - 1.0);
        CHECK(divergence_eu(p, q, gamma) == doctest::Approx(renyi).epsilon(1e-10));
    }

    CHECK(divergence_eu(p, p, 2.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("the entropy-maximizing prior reproduces the equilibrium prior") {
    for (double gamma : {0.5, 2.0, 3.0}) {
        const GameSpec s = iso_spec(2, 1, 3, 5, gamma);
        const EntropyCriteria crit = prior_vs_entropy_criteria(s, gamma);
        const IsoEquilibrium eq = solve_iso(s, gamma);
        CHECK(std::abs(crit.P_eu - *eq.P_star) < 1e-6);
        CHECK(crit.P_renyi > 0.0);
        CHECK(crit.P_renyi < 1.0);
        CHECK(crit.P_tsallis > 0.0);
        CHECK(crit.P_tsallis < 1.0);
    }
}

TEST_CASE("swapped inputs report the exchanged labels") {
    const IsoEquilibrium eq = solve_iso(iso_spec(1, 1, 0, 2, 2.0), 2.0);
    const IsoEquilibrium ref = solve_iso(iso_spec(1, 0, 1, 2, 2.0), 2.0);
    CHECK(eq.swapped);
    CHECK(!ref.swapped);
    CHECK(*eq.P_star == doctest::Approx(*ref.P_star).epsilon(1e-12));
    CHECK(eq.split(0) == doctest::Approx(ref.split(0)).epsilon(1e-12));
}
