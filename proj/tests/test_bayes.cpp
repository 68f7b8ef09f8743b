#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "statgames/bayes.hpp"
#include "statgames/dist.hpp"
#include "statgames/errors.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

using namespace statgames;

namespace {

GameSpec bayes_spec(std::int64_t N, std::int64_t K_A, std::int64_t K_B, std::int64_t M) {
    GameSpec s;
    s.N = N;
    s.K_A = K_A;
    s.K_B = K_B;
    s.M = M;
    s.kind = GameKind::Bayesian;
    return s;
}

GameSpec random_nontrivial(std::mt19937_64& rng, std::int64_t max_M) {
    for (;;) {
        const std::int64_t M = 2 + std::int64_t(rng() % std::uint64_t(max_M - 1));
        const GameSpec s = bayes_spec(1 + std::int64_t(rng() % std::uint64_t(M)),
                                      std::int64_t(rng() % std::uint64_t(M + 1)),
                                      std::int64_t(rng() % std::uint64_t(M + 1)), M);
        if (classify(s) == GameClass::Nontrivial) return s.canonical();
    }
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Conditional Shannon entropy of the scenario given the observed count,
// assembled from the joint distribution with no reference to the solver.
double scenario_entropy_given_count(const PmfPair& d, double P) {
    double h = 0.0;
    for (std::int64_t k = 0; k <= d.N; ++k) {
        const double joint_A = P * d.pA(k);
        const double joint_B = (1.0 - P) * d.pB(k);
        const double mass = joint_A + joint_B;
        if (mass <= 0.0) continue;
        if (joint_A > 0.0) h -= joint_A * std::log(joint_A / mass);
        if (joint_B > 0.0) h -= joint_B * std::log(joint_B / mass);
    }
    return h;
}

const double kGoldenPrior = 1.0 / std::sqrt(5.0);
const double kGoldenSplit = (std::sqrt(5.0) - 1.0) / 2.0;

} // namespace

TEST_CASE("the golden-ratio game solves identically under every applicable method") {
    // The interval method is reserved for identical supports, which this game
    // does not have; all other routes must agree.
    const BettingMethod methods[] = {BettingMethod::Bisection, BettingMethod::FixedPoint,
                                     BettingMethod::Newton, BettingMethod::Restricted,
                                     BettingMethod::Auto};
    for (BettingMethod m : methods) {
        CAPTURE(to_string(m));
        SolverConfig cfg;
        cfg.method = m;
        const BettingEquilibrium eq = solve_bayes(bayes_spec(1, 0, 1, 2), cfg);
        CHECK(eq.game_class == GameClass::Nontrivial);
        REQUIRE(eq.P_star.has_value());
        CHECK(std::abs(*eq.P_star - kGoldenPrior) < 1e-10);
        CHECK(std::abs(eq.split(0) - kGoldenSplit) < 1e-10);
        CHECK(eq.split(1) == 0.0); // k = 1 can only occur under scenario B
        CHECK(std::abs(eq.G_over_log2 - 0.3058) < 5e-5);
        CHECK(eq.err_bound <= 1e-10);
        CHECK(eq.iterations <= 400);
        CHECK(*eq.theta_star ==
              doctest::Approx(std::log(*eq.P_star / (1.0 - *eq.P_star))).epsilon(1e-12));
        if (m != BettingMethod::Auto) CHECK(eq.method_used == m);
    }

    SolverConfig interval_cfg;
    interval_cfg.method = BettingMethod::Interval;
    CHECK_THROWS_AS(solve_bayes(bayes_spec(1, 0, 1, 2), interval_cfg), SupportMismatch);
}

TEST_CASE("the betting edge is minus the scenario entropy left after sampling") {
    std::mt19937_64 rng(1209);
    for (int i = 0; i < 50; ++i) {
        const GameSpec s = random_nontrivial(rng, 30);
        const PmfPair d = to_pmf_pair(hypergeom_pmfs(s));
        for (double P : {0.07, 0.3, 0.5, 0.82}) {
            const double lhs = delta_G(d, P);
            const double rhs = -scenario_entropy_given_count(d, P);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            CHECK(lhs <= 1e-15);
            CHECK(lhs >= -std::log(2.0) - 1e-15);
        }
    }
}

TEST_CASE("derivatives of the betting edge match central differences") {
    std::mt19937_64 rng(5551);
    for (int i = 0; i < 100; ++i) {
        const GameSpec s = random_nontrivial(rng, 24);
        const PmfPair d = to_pmf_pair(hypergeom_pmfs(s));
        const double P = 0.05 + 0.9 * (double(rng() % 10000) / 10000.0);

        const DeltaGDerivs derivs = delta_G_derivs(d, P);
        const double h1 = 1e-6;
        const double fd1 = (delta_G(d, P + h1) - delta_G(d, P - h1)) / (2.0 * h1);
        CHECK(std::abs(derivs.first - fd1) < 1e-6);

        const double h2 = 1e-4;
        const double fd2 =
            (delta_G(d, P + h2) - 2.0 * delta_G(d, P) + delta_G(d, P - h2)) / (h2 * h2);
        CHECK(std::abs(derivs.second - fd2) < 1e-6 * std::max(1.0, std::abs(derivs.second)));
        CHECK(derivs.second > 0.0);
    }
}

TEST_CASE("the log-odds map contracts at the advertised total-variation rate") {
    std::mt19937_64 rng(160218);
    for (int g = 0; g < 10; ++g) {
        const GameSpec s = random_nontrivial(rng, 30);
        const PmfPair d = to_pmf_pair(hypergeom_pmfs(s));
        const LogOddsMap F(d);

        // The advertised rate is the total variation distance of the pmfs.
        double tv = 0.0;
        for (std::int64_t k = 0; k <= d.N; ++k) tv += std::abs(d.pA(k) - d.pB(k));
        tv /= 2.0;
        CHECK(F.contraction() == doctest::Approx(tv).epsilon(1e-12));
        CHECK(F.contraction() < 1.0);

        for (int p = 0; p < 200; ++p) {
            const double t1 = -25.0 + 50.0 * (double(rng() % 100000) / 100000.0);
            const double t2 = -25.0 + 50.0 * (double(rng() % 100000) / 100000.0);
            if (t1 == t2) continue;
            CHECK(std::abs(F(t1) - F(t2)) <= F.contraction() * std::abs(t1 - t2) + 1e-13);
            CHECK(std::abs(F.derivative(t1)) <= F.contraction() + 1e-13);
        }

        const bool a_inside_b = d.support_B.lo <= d.support_A.lo &&
                                d.support_A.hi <= d.support_B.hi;
        const bool b_inside_a = d.support_A.lo <= d.support_B.lo &&
                                d.support_B.hi <= d.support_A.hi;
        CHECK(std::isfinite(F.kl_AB()) == a_inside_b);
        CHECK(std::isfinite(F.kl_BA()) == b_inside_a);
    }
}

TEST_CASE("every method lands inside the certified error bounds of the others") {
    std::mt19937_64 rng(808);
    for (int g = 0; g < 25; ++g) {
        const GameSpec s = random_nontrivial(rng, 24);
        CAPTURE(s.N);
        CAPTURE(s.K_A);
        CAPTURE(s.K_B);
        CAPTURE(s.M);
        const PmfPair d = to_pmf_pair(hypergeom_pmfs(s));
        std::vector<BettingMethod> methods = {BettingMethod::Bisection, BettingMethod::FixedPoint,
                                              BettingMethod::Newton, BettingMethod::Restricted};
        if (d.support_A.lo == d.support_B.lo && d.support_A.hi == d.support_B.hi)
            methods.push_back(BettingMethod::Interval);
        std::vector<BettingEquilibrium> results;
        for (BettingMethod m : methods) {
            SolverConfig cfg;
            cfg.method = m;
            // Plain iteration needs ~log(tol)/log(q) steps; near-blind games
            // with q close to 1 can exhaust the default cap, which is their
            // contract, so the two unaccelerated routes get more headroom.
            if (m == BettingMethod::FixedPoint || m == BettingMethod::Restricted)
                cfg.max_iter = 1000000;
            results.push_back(solve_bayes(s, cfg));
        }
        for (std::size_t i = 0; i < results.size(); ++i)
            for (std::size_t j = i + 1; j < results.size(); ++j) {
                const double gap = std::abs(*results[i].theta_star - *results[j].theta_star);
                CHECK(gap <= results[i].err_bound + results[j].err_bound + 1e-12);
            }
        for (const BettingEquilibrium& eq : results)
            CHECK(*eq.P_star == doctest::Approx(sigmoid(*eq.theta_star)).epsilon(1e-12));
    }
}

TEST_CASE("plain fixed-point iteration shrinks its steps geometrically") {
    const PmfPair d = to_pmf_pair(hypergeom_pmfs(bayes_spec(3, 2, 4, 8)));
    const LogOddsMap F(d);
    const double q = F.contraction();
    REQUIRE(q < 1.0);

    for (double theta : {-3.0, 0.0, 2.5}) {
        double prev = theta;
        double cur = F(theta);
        for (int i = 0; i < 30; ++i) {
            const double next = F(cur);
            CHECK(std::abs(next - cur) <= q * std::abs(cur - prev) + 1e-14);
            prev = cur;
            cur = next;
        }
    }

    SolverConfig cfg;
    cfg.method = BettingMethod::FixedPoint;
    const BettingEquilibrium eq = solve_bayes(bayes_spec(3, 2, 4, 8), cfg);
    CHECK(eq.method_used == BettingMethod::FixedPoint);
    CHECK(eq.err_bound <= cfg.tol);
}

TEST_CASE("interval and Newton refinements agree with a tight bisection") {
    std::mt19937_64 rng(31337);
    int examined = 0;
    while (examined < 15) {
        const GameSpec s = random_nontrivial(rng, 20);
        const PmfPair d = to_pmf_pair(hypergeom_pmfs(s));
        if (d.support_A.lo != d.support_B.lo || d.support_A.hi != d.support_B.hi) continue;
        ++examined;

        SolverConfig fine;
        fine.method = BettingMethod::Bisection;
        fine.tol = 1e-14;
        const BettingEquilibrium ref = solve_bayes(s, fine);

        for (BettingMethod m : {BettingMethod::Interval, BettingMethod::Newton}) {
            SolverConfig cfg;
            cfg.method = m;
            const BettingEquilibrium eq = solve_bayes(s, cfg);
            CHECK(std::abs(*eq.theta_star - *ref.theta_star) <=
                  eq.err_bound + ref.err_bound + 1e-12);
        }
    }
}

TEST_CASE("the support-rescaled route handles mismatched supports") {
    const GameSpec s = bayes_spec(2, 0, 3, 6);
    SolverConfig cfg;
    cfg.method = BettingMethod::Restricted;
    const BettingEquilibrium eq = solve_bayes(s, cfg);

    SolverConfig fine;
    fine.method = BettingMethod::Bisection;
    fine.tol = 1e-14;
    const BettingEquilibrium ref = solve_bayes(s, fine);

    CHECK(std::abs(*eq.theta_star - *ref.theta_star) <= eq.err_bound + ref.err_bound + 1e-12);
    REQUIRE(eq.contraction_estimate.has_value());
    CHECK(*eq.contraction_estimate < 1.0);

    const PmfPair d = to_pmf_pair(hypergeom_pmfs(s));
    const RestrictedMap R(d);
    const double chi = R.chi_of_logodds(*eq.theta_star);
    CHECK(R.logodds_of_chi(chi) == doctest::Approx(*eq.theta_star).epsilon(1e-12));
    CHECK(chi >= R.range_lo() - 1e-9);
    CHECK(chi <= R.range_hi() + 1e-9);
}

TEST_CASE("the seventeen-sample reference game reproduces its known prior") {
    const BettingEquilibrium eq = solve_bayes(bayes_spec(17, 10, 16, 27));
    CHECK(std::abs(*eq.P_star - 0.4953) < 5e-5);
    CHECK(eq.err_bound <= 1e-10);
}

TEST_CASE("blind and sure games fill the degenerate report shapes") {
    const BettingEquilibrium blind = solve_bayes(bayes_spec(2, 1, 1, 4));
    CHECK(blind.game_class == GameClass::BlindGuessing);
    CHECK(*blind.P_star == 0.5);
    CHECK(*blind.theta_star == 0.0);
    CHECK(blind.delta_G == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    CHECK(blind.G_over_log2 == doctest::Approx(0.0).epsilon(1e-14));
    for (std::int64_t k = blind.split_support.lo; k <= blind.split_support.hi; ++k)
        CHECK(blind.split(k) == 0.5);

    const BettingEquilibrium sure = solve_bayes(bayes_spec(1, 0, 2, 2));
    CHECK(sure.game_class == GameClass::SureWinning);
    CHECK(!sure.P_star.has_value());
    CHECK(sure.delta_G == 0.0);
    CHECK(sure.G_over_log2 == 1.0);
    CHECK(sure.split(0) == 1.0); // k = 0 only occurs under scenario A
    CHECK(sure.split(1) == 0.0);
}

TEST_CASE("optimal splits are the posterior and leave the chooser indifferent") {
    std::mt19937_64 rng(640);
    for (int g = 0; g < 25; ++g) {
        const GameSpec s = random_nontrivial(rng, 24);
        const BettingEquilibrium eq = solve_bayes(s);
        const PmfPair d = to_pmf_pair(hypergeom_pmfs(s));

        for (std::int64_t k = d.support_AB.lo; k <= d.support_AB.hi; ++k) {
            const double posterior =
                sigmoid(*eq.theta_star + std::log(d.pA(k)) - std::log(d.pB(k)));
            CHECK(eq.split(k) == doctest::Approx(posterior).epsilon(1e-12));
        }
        for (std::int64_t k = eq.split_support.lo; k <= eq.split_support.hi; ++k) {
            if (d.support_A.contains(k) && !d.support_B.contains(k)) CHECK(eq.split(k) == 1.0);
            if (d.support_B.contains(k) && !d.support_A.contains(k)) CHECK(eq.split(k) == 0.0);
        }

        double growth_A = 0.0, growth_B = 0.0;
        for (std::int64_t k = 0; k <= d.N; ++k) {
            if (d.pA(k) > 0.0) growth_A += d.pA(k) * std::log(eq.split(k));
            if (d.pB(k) > 0.0) growth_B += d.pB(k) * std::log(1.0 - eq.split(k));
        }
        CHECK(std::abs(growth_A - growth_B) < 1e-8);
    }
}

TEST_CASE("swapped inputs report the exchanged labels") {
    const BettingEquilibrium eq = solve_bayes(bayes_spec(1, 1, 0, 2));
    const BettingEquilibrium ref = solve_bayes(bayes_spec(1, 0, 1, 2));
    CHECK(eq.swapped);
    CHECK(!ref.swapped);
    CHECK(*eq.P_star == doctest::Approx(*ref.P_star).epsilon(1e-14));
    CHECK(eq.split(0) == doctest::Approx(ref.split(0)).epsilon(1e-14));
}

TEST_CASE("method names render as their command-line spellings") {
    CHECK(std::string(to_string(BettingMethod::Bisection)) == "bisection");
    CHECK(std::string(to_string(BettingMethod::FixedPoint)) == "fixed-point");
    CHECK(std::string(to_string(BettingMethod::Interval)) == "interval");
    CHECK(std::string(to_string(BettingMethod::Newton)) == "newton");
    CHECK(std::string(to_string(BettingMethod::Restricted)) == "restricted");
    CHECK(std::string(to_string(BettingMethod::Auto)) == "auto");
}
