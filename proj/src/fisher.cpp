#include "statgames/fisher.hpp"

#include "statgames/errors.hpp"

#include <cmath>

namespace statgames {

namespace {

// Shared threshold-equilibrium construction; Dist is ScenarioDistributions
// (Scalar = Rational, exact) or PmfPair (Scalar = double, scar_tol > 0).
template <class Scalar, class Dist>
ThresholdEquilibrium<Scalar> threshold_equilibrium(const Dist& d, std::int64_t N,
                                                   GameClass cls, bool swapped,
                                                   const Scalar& scar_tol) {
    ThresholdEquilibrium<Scalar> eq;
    eq.game_class = cls;
    eq.swapped = swapped;
    if (cls == GameClass::BlindGuessing) {
        eq.P_star = Scalar(1) / 2;
        eq.v_star = Scalar(1) / 2;
        return eq;
    }
    if (cls == GameClass::SureWinning) {
        eq.v_star = Scalar(1);
        return eq;
    }

    const SupportInterval u = d.support_union;
    // k* is the smallest count at which the combined cdf of the two scenarios
    // crosses 1; the union support is contiguous for overlapping scenarios.
    std::int64_t k_star = u.hi;
    {
        Scalar cum = Scalar(0);
        for (std::int64_t k = u.lo; k <= u.hi; ++k) {
            cum += d.pA(k) + d.pB(k);
            if (cum > Scalar(1)) {
                k_star = k;
                break;
            }
        }
    }
    Scalar head_A = Scalar(0); // P(k < k* | A)
    for (std::int64_t k = u.lo; k < k_star; ++k) head_A += d.pA(k);
    Scalar tail_B = Scalar(0); // P(k >= k* | B)
    for (std::int64_t k = k_star; k <= u.hi; ++k) tail_B += d.pB(k);

    const Scalar pA = d.pA(k_star);
    const Scalar pB = d.pB(k_star);
    Scalar nu = (tail_B - head_A) / (pA + pB);
    if (nu < scar_tol && nu > -scar_tol) nu = Scalar(0);

    eq.k_star = k_star;
    eq.nu_star = nu;
    eq.v_star = head_A + nu * pA;
    eq.s_star = (Scalar(k_star) + nu) / Scalar(N + 1);
    const Scalar P_hi = pB / (pA + pB);
    if (nu == Scalar(0)) {
        // Degenerate mixing: every prior of the interval is an equilibrium.
        // k* > support_union.lo here (nu would be positive at the lower end),
        // so the left endpoint is well defined.
        const Scalar qA = d.pA(k_star - 1);
        const Scalar qB = d.pB(k_star - 1);
        const Scalar P_lo = qB / (qA + qB);
        eq.prior_interval = std::make_pair(P_lo, P_hi);
        eq.P_star = (P_lo + P_hi) / 2;
    } else {
        eq.P_star = P_hi;
    }
    return eq;
}

} // namespace

FisherEquilibrium solve_fisher(const GameSpec& spec) {
    const GameSpec canon = spec.canonical();
    const GameClass cls = classify(canon);
    if (cls != GameClass::Nontrivial) {
        ScenarioDistributions d; // pmfs not needed for the degenerate shells
        return threshold_equilibrium<Rational>(d, canon.N, cls, canon.swapped, Rational(0));
    }
    const ScenarioDistributions d = hypergeom_pmfs(canon);
    return threshold_equilibrium<Rational>(d, canon.N, cls, canon.swapped, Rational(0));
}

std::map<std::int64_t, Rational> winning_rate_curve(const GameSpec& spec) {
    const GameSpec canon = spec.canonical();
    if (classify(canon) != GameClass::Nontrivial)
        throw DomainError("winning_rate_curve needs a nontrivial game");
    const ScenarioDistributions d = hypergeom_pmfs(canon);

    std::map<std::int64_t, Rational> curve;
    for (std::int64_t k = d.support_AB.lo; k <= d.support_AB.hi; ++k) {
        Rational head_A = 0;
        for (std::int64_t j = d.support_union.lo; j < k; ++j) head_A += d.pA(j);
        Rational tail_B = 0;
        for (std::int64_t j = k; j <= d.support_union.hi; ++j) tail_B += d.pB(j);
        // The chooser-indifferent mixing weight at a pin k is a probability
        // only at the equilibrium threshold itself; where it falls outside
        // [0,1) the pinned strategy degrades to the plain cutoff (weight 0),
        // which wins min(P(k' < k | A), P(k' >= k | B)).
        const Rational den = d.pA(k) + d.pB(k);
        const Rational nu_num = tail_B - head_A;
        if (nu_num >= 0 && nu_num < den)
            curve[k] = (d.pA(k) * tail_B + d.pB(k) * head_A) / den;
        else
            curve[k] = std::min(head_A, tail_B);
    }
    return curve;
}

namespace {

std::int64_t smallest_strong_median(const std::vector<Rational>& pmf,
                                    const SupportInterval& support) {
    // Smallest c with cdf(c) >= 1/2; P(X >= c) >= 1/2 then holds automatically
    // because cdf(c-1) < 1/2.
    Rational cum = 0;
    for (std::int64_t k = support.lo; k <= support.hi; ++k) {
        cum += pmf[static_cast<std::size_t>(k)];
        if (cum >= Rational(1, 2)) return k;
    }
    return support.hi;
}

} // namespace

MedianBounds median_bounds(const GameSpec& spec) {
    const GameSpec canon = spec.canonical();
    const ScenarioDistributions d = hypergeom_pmfs(canon);
    MedianBounds mb;
    mb.median_A = smallest_strong_median(d.pmf_A, d.support_A);
    mb.median_B = smallest_strong_median(d.pmf_B, d.support_B);
    return mb;
}

BinomialFisherEquilibrium binomial_fisher(std::int64_t N, double x_A, double x_B,
                                          double scar_tol) {
    if (!(x_A > 0.0 && x_A < 1.0) || !(x_B > 0.0 && x_B < 1.0))
        throw InvalidFraction("binomial_fisher: rates must lie strictly between 0 and 1");
    if (N < 0) throw DomainError("binomial_fisher: N must be nonnegative");

    bool swapped = false;
    if (x_A > x_B) {
        std::swap(x_A, x_B);
        swapped = true;
    }
    const GameClass cls =
        (N == 0 || x_A == x_B) ? GameClass::BlindGuessing : GameClass::Nontrivial;
    const PmfPair d = binom_pmfs(N, x_A, x_B);
    return threshold_equilibrium<double>(d, N, cls, swapped, scar_tol);
}

} // namespace statgames
