#pragma once

#include <cstdint>
#include <utility>

namespace statgames {

// N -> infinity behaviour of binomial games. Finite games elsewhere in the
// library are exact; everything in this header is binary64 and some of it
// rests on conjectured (numerically supported, unproven) limits. Functions
// that return such values are marked "conjectured" below so callers can
// label downstream output honestly.

// A binomial game in the large-M limit: N draws, success rates x_A and x_B.
struct BinomialGameSpec {
    std::int64_t N = 0;
    double x_A = 0.0;
    double x_B = 0.0;
    bool swapped = false;  // set by canonical() when the rates were exchanged

    // Throws InvalidSpec unless N >= 1 and 0 < x_A, x_B < 1 with x_A != x_B.
    void validate() const;

    // Returns a copy with x_A < x_B, flagging whether a swap happened.
    BinomialGameSpec canonical() const;
};

// Large-deviation rate of seeing success fraction x under true rate x_theta,
// together with its first two derivatives in x.
struct RateFunction {
    double I;
    double I_prime;
    double I_double_prime;
};

// I(x, x_theta) = x log(x/x_theta) + (1-x) log((1-x)/(1-x_theta)).
// Requires x, x_theta in (0,1); throws DomainError otherwise.
RateFunction rate_function(double x, double x_theta);

// Success fraction both scenarios are equally surprised by: the unique
// x0 in (x_A, x_B) with I(x0, x_A) = I(x0, x_B). The threshold policy
// k*/N of finite binomial win/lose games converges to it.
// Requires 0 < x_A < x_B < 1.
double fisher_policy_limit(double x_A, double x_B);

// Conjectured (liminf, limsup) of the win/lose equilibrium prior P*_N as
// N grows; the prior oscillates inside this band instead of converging.
// The gap between the bounds is exactly beta in log-odds.
std::pair<double, double> fisher_prior_limit_bounds(double x_A, double x_B);

// Zeroth-order large-N approximation of the log-utility equilibrium prior,
// equal to 1 - alpha_A. Conjectured limit of the oscillation's center.
double bayes_prior_approx(double x_A, double x_B);

// Laplace-transform kernel -pi / (alpha sin(pi alpha)). Defined for any
// non-integer alpha; throws PoleError within 1e-9 of an integer.
double kernel_C(double alpha);

// Risk-aversion generalization -(1/alpha) B(1 - gamma*alpha,
// 1 - gamma*(1-alpha)) of the kernel above; reduces to kernel_C at
// gamma = 1. Throws PoleError when a Beta argument reaches a pole
// (gamma*alpha >= 1 or gamma*(1-alpha) >= 1) or alpha is ~0.
double kernel_C_gamma(double alpha, double gamma);

// First-order expansion theta*_N ~ theta_limit + sampi/N of the equilibrium
// log-odds of binomial log-utility games (conjectured).
struct SampiExpansion {
    double sampi;        // coefficient of the 1/N term, in nats
    double theta_limit;  // zeroth-order log-odds, logit(bayes_prior_approx)

    double theta_at(std::int64_t N) const {
        return theta_limit + sampi / static_cast<double>(N);
    }
};

SampiExpansion sampi_first_order(double x_A, double x_B);

// Phase-dependent approximation of the equilibrium prior at finite N:
// fixed point of the truncated harmonic series, seeded at the zeroth-order
// value and damped by 1/2 per step. harmonics = 0 returns
// bayes_prior_approx exactly. Throws NoConvergence when the damped
// iteration fails within 1000 steps (conjecture territory; callers should
// report rather than abort).
double phase_series_prior(double x_A, double x_B, std::int64_t N, int harmonics);

// Critical relative risk aversion min(1/alpha_A, 1/(1-alpha_A)) below which
// the asymptotic kernel integrals converge. Always in (1, 2].
double gamma_critical(double x_A, double x_B);

// One-stop aggregate of the quantities above for a given game.
struct AsymptoticResult {
    double x0_star;            // limiting threshold fraction
    double beta;               // log-odds growth rate per draw, nats
    double alpha_A;            // I'_A(x0*) / beta, in (0,1)
    double alpha_B;            // I'_B(x0*) / beta = alpha_A - 1
    double epsilon;            // rate exponent I(x0*, x_A) = I(x0*, x_B)
    double P_approx;           // zeroth-order prior approximation
    double sampi;              // 1/N log-odds correction, nats
    double theta_first_order;  // theta_limit + sampi/N at this N
    double phi;                // phase 2 pi N x0* mod 2 pi, radians
    double gamma_diamond;      // critical risk aversion
    std::pair<double, double> fisher_prior_bounds;  // (P_low, P_high)
};

AsymptoticResult asymptotic_summary(double x_A, double x_B, std::int64_t N);

// Same, accepting either rate order; probability-like fields are reflected
// back to the caller's labeling when the canonical form swapped them.
AsymptoticResult asymptotic_summary(const BinomialGameSpec& game);

}  // namespace statgames
