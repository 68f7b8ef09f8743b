#include "statgames/asymptotics.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>

#include "statgames/errors.hpp"
#include "logspace.hpp"

namespace statgames {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_rates(const char* who, double x_A, double x_B) {
    if (!(x_A > 0.0 && x_A < 1.0) || !(x_B > 0.0 && x_B < 1.0))
        throw DomainError(std::string(who) + ": rates must lie in (0,1)");
    if (!(x_A < x_B))
        throw DomainError(std::string(who) + ": requires x_A < x_B");
}

// Shared scaffolding of the limit formulas: threshold fraction, growth
// rate, and the normalized slopes of the two rate functions there.
struct LimitCore {
    double x0;
    double beta;
    double alpha_A;  // in (0,1)
    double alpha_B;  // alpha_A - 1
};

LimitCore limit_core(double x_A, double x_B) {
    LimitCore c;
    c.beta = std::log(((1.0 - x_A) * x_B) / ((1.0 - x_B) * x_A));
    c.x0 = std::log((1.0 - x_A) / (1.0 - x_B)) / c.beta;
    c.alpha_A = std::log(c.x0 * (1.0 - x_A) / (x_A * (1.0 - c.x0))) / c.beta;
    c.alpha_B = std::log(c.x0 * (1.0 - x_B) / (x_B * (1.0 - c.x0))) / c.beta;
    return c;
}

std::pair<double, double> prior_bounds_core(const LimitCore& c) {
    // 1 - e^{alpha_B beta} and 1 - e^{-alpha_A beta} are both positive:
    // alpha_B < 0 < alpha_A and beta > 0.
    double common = std::log(-std::expm1(c.alpha_B * c.beta)) -
                    std::log(-std::expm1(-c.alpha_A * c.beta));
    double lo = common - c.alpha_A * c.beta;
    double hi = common - c.alpha_B * c.beta;
    return {num::sigmoid(lo), num::sigmoid(hi)};
}

double sampi_core(const LimitCore& c, double theta_limit) {
    double x0 = c.x0;
    double aA = c.alpha_A;
    double n_prime = -(1.0 - 2.0 * x0) / (2.0 * x0 * (1.0 - x0));
    double kappa = 1.0 / (x0 * (1.0 - x0));
    double bracket = -2.0 * (1.0 - 2.0 * aA) / (aA * aA * (1.0 - aA) * (1.0 - aA)) -
                     (2.0 * kPi / (aA * (1.0 - aA))) *
                         std::cos(kPi * aA) / std::sin(kPi * aA);
    return (n_prime / c.beta - kappa * theta_limit / (c.beta * c.beta)) /
               (aA * (1.0 - aA)) +
           0.5 * (kappa / (c.beta * c.beta)) * bracket;
}

}  // namespace

void BinomialGameSpec::validate() const {
    if (N < 1)
        throw InvalidSpec("BinomialGameSpec: N must be at least 1");
    if (!(x_A > 0.0 && x_A < 1.0) || !(x_B > 0.0 && x_B < 1.0))
        throw InvalidSpec("BinomialGameSpec: rates must lie in (0,1)");
    if (x_A == x_B)
        throw InvalidSpec("BinomialGameSpec: equal rates leave nothing to infer");
}

BinomialGameSpec BinomialGameSpec::canonical() const {
    validate();
    BinomialGameSpec g = *this;
    if (g.x_A > g.x_B) {
        std::swap(g.x_A, g.x_B);
        g.swapped = !g.swapped;
    }
    return g;
}

RateFunction rate_function(double x, double x_theta) {
    if (!(x > 0.0 && x < 1.0) || !(x_theta > 0.0 && x_theta < 1.0))
        throw DomainError("rate_function: arguments must lie in (0,1)");
    RateFunction r;
    r.I = x * std::log(x / x_theta) + (1.0 - x) * std::log((1.0 - x) / (1.0 - x_theta));
    r.I_prime = std::log(x * (1.0 - x_theta) / (x_theta * (1.0 - x)));
    r.I_double_prime = 1.0 / (x * (1.0 - x));
    return r;
}

double fisher_policy_limit(double x_A, double x_B) {
    check_rates("fisher_policy_limit", x_A, x_B);
    return limit_core(x_A, x_B).x0;
}

std::pair<double, double> fisher_prior_limit_bounds(double x_A, double x_B) {
    check_rates("fisher_prior_limit_bounds", x_A, x_B);
    return prior_bounds_core(limit_core(x_A, x_B));
}

double bayes_prior_approx(double x_A, double x_B) {
    check_rates("bayes_prior_approx", x_A, x_B);
    LimitCore c = limit_core(x_A, x_B);
    return std::log(((1.0 - c.x0) * x_B) / ((1.0 - x_B) * c.x0)) / c.beta;
}

double kernel_C(double alpha) {
    if (std::abs(alpha - std::round(alpha)) < 1e-9)
        throw PoleError("kernel_C: pole at integer alpha");
    return -kPi / (alpha * std::sin(kPi * alpha));
}

double kernel_C_gamma(double alpha, double gamma) {
    if (std::abs(alpha) < 1e-9)
        throw PoleError("kernel_C_gamma: pole at alpha = 0");
    double a = 1.0 - gamma * alpha;
    double b = 1.0 - gamma * (1.0 - alpha);
    if (!(a > 1e-9) || !(b > 1e-9))
        throw PoleError("kernel_C_gamma: Beta argument at or past a pole");
    return -(1.0 / alpha) * std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

SampiExpansion sampi_first_order(double x_A, double x_B) {
    check_rates("sampi_first_order", x_A, x_B);
    LimitCore c = limit_core(x_A, x_B);
    if (!(c.alpha_A > 0.0 && c.alpha_A < 1.0))
        throw DomainError("sampi_first_order: alpha_A outside (0,1)");
    SampiExpansion e;
    e.theta_limit = num::logit(-c.alpha_B);
    e.sampi = sampi_core(c, e.theta_limit);
    return e;
}

double phase_series_prior(double x_A, double x_B, std::int64_t N, int harmonics) {
    check_rates("phase_series_prior", x_A, x_B);
    if (N < 1)
        throw DomainError("phase_series_prior: N must be at least 1");
    if (harmonics < 0)
        throw DomainError("phase_series_prior: harmonics must be non-negative");
    if (harmonics == 0)
        return bayes_prior_approx(x_A, x_B);

    LimitCore c = limit_core(x_A, x_B);
    double alpha = c.alpha_A;
    double phi = std::fmod(2.0 * kPi * static_cast<double>(N) * c.x0, 2.0 * kPi);
    double sin_pa = std::sin(kPi * alpha);

    auto xi = [&](double theta) -> double {
        double omega = phi + 2.0 * kPi * theta / c.beta;
        double numer = kPi / (alpha * sin_pa);
        double denom = kPi / ((1.0 - alpha) * sin_pa);
        for (int m = 1; m <= harmonics; ++m) {
            double shift = 2.0 * kPi * static_cast<double>(m) / c.beta;
            // |sin| grows like e^{pi shift}/2 along the imaginary axis, so
            // once pi*shift passes ~700 a term underflows to nothing (and
            // naive complex division would produce NaN).
            if (kPi * shift > 700.0)
                break;
            std::complex<double> w(0.0, shift);
            std::complex<double> phase = std::exp(std::complex<double>(0.0, m * omega));
            std::complex<double> num_t =
                (kPi / (alpha - w)) * phase / std::sin(kPi * alpha - kPi * w);
            std::complex<double> den_t =
                (kPi / (1.0 - alpha + w)) * phase / std::sin(kPi * alpha + kPi * w);
            numer += 2.0 * num_t.real();
            denom += 2.0 * den_t.real();
        }
        if (!(numer > 0.0) || !(denom > 0.0))
            throw NoConvergence(
                "phase_series_prior: truncated series left the positive domain");
        return std::log(numer / denom);
    };

    // Damped fixed-point iteration seeded at the zeroth-order log-odds. The
    // truncated map can have several roots; staying near the seed and giving
    // up beats hopping to a spurious one.
    double theta = num::logit(-c.alpha_B);
    for (int iter = 0; iter < 1000; ++iter) {
        double step = xi(theta) - theta;
        theta += 0.5 * step;
        if (std::abs(step) <= 1e-12 * (1.0 + std::abs(theta)))
            return num::sigmoid(theta);
    }
    throw NoConvergence("phase_series_prior: damped iteration did not settle");
}

double gamma_critical(double x_A, double x_B) {
    check_rates("gamma_critical", x_A, x_B);
    LimitCore c = limit_core(x_A, x_B);
    double g = std::min(1.0 / c.alpha_A, 1.0 / (1.0 - c.alpha_A));
    if (!(g > 1.0 && g <= 2.0 + 1e-12))
        throw DomainError("gamma_critical: value escaped (1,2], alpha_A degenerate");
    return g;
}

AsymptoticResult asymptotic_summary(double x_A, double x_B, std::int64_t N) {
    check_rates("asymptotic_summary", x_A, x_B);
    if (N < 1)
        throw DomainError("asymptotic_summary: N must be at least 1");
    LimitCore c = limit_core(x_A, x_B);
    AsymptoticResult r;
    r.x0_star = c.x0;
    r.beta = c.beta;
    r.alpha_A = c.alpha_A;
    r.alpha_B = c.alpha_B;
    r.epsilon = rate_function(c.x0, x_A).I;
    r.P_approx = -c.alpha_B;
    double theta_limit = num::logit(r.P_approx);
    r.sampi = sampi_core(c, theta_limit);
    r.theta_first_order = theta_limit + r.sampi / static_cast<double>(N);
    r.phi = std::fmod(2.0 * kPi * static_cast<double>(N) * c.x0, 2.0 * kPi);
    r.gamma_diamond = std::min(1.0 / c.alpha_A, 1.0 / (1.0 - c.alpha_A));
    r.fisher_prior_bounds = prior_bounds_core(c);
    return r;
}

AsymptoticResult asymptotic_summary(const BinomialGameSpec& game) {
    BinomialGameSpec g = game.canonical();
    AsymptoticResult r = asymptotic_summary(g.x_A, g.x_B, g.N);
    if (g.swapped) {
        // Exchanging the scenario labels reflects every probability-like
        // output; threshold, rates, and phase describe the same draws.
        r.P_approx = 1.0 - r.P_approx;
        r.sampi = -r.sampi;
        r.theta_first_order = -r.theta_first_order;
        r.fisher_prior_bounds = {1.0 - r.fisher_prior_bounds.second,
                                 1.0 - r.fisher_prior_bounds.first};
    }
    return r;
}

}  // namespace statgames
