#include "statgames/iso.hpp"

#include "statgames/bayes.hpp"
#include "statgames/errors.hpp"
#include "statgames/fisher.hpp"

#include "logspace.hpp"

#include <algorithm>
#include <cmath>

namespace statgames {

namespace {

using num::inf;
using num::logadd;
using num::logit;
using num::safe_log;
using num::sigmoid;
using num::softplus;
using num::xlogx;

void check_gamma(double gamma) {
    if (!(gamma > 0) || !std::isfinite(gamma))
        throw DomainError("risk aversion must be positive and finite");
}

void check_prior(double P) {
    if (!(P > 0 && P < 1)) throw DomainError("prior must lie in (0, 1)");
}

void check_normalized(const std::vector<double>& p) {
    double sum = 0.0;
    for (double v : p) {
        if (v < 0 || !std::isfinite(v)) throw NotNormalized("negative or non-finite mass");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw NotNormalized("probabilities must sum to 1");
}

double shannon(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p) h -= xlogx(v);
    return h;
}

} // namespace

double isoelastic_utility(double c, double gamma) {
    check_gamma(gamma);
    if (!(c >= 0 && c <= 1)) throw DomainError("capital fraction must lie in [0, 1]");
    if (gamma == 1.0) return std::log(c);
    if (c == 0.0) return gamma > 1 ? -inf : -1.0 / (1.0 - gamma);
    return std::expm1((1.0 - gamma) * std::log(c)) / (1.0 - gamma);
}

double expected_utility(const PmfPair& d, double P, double gamma) {
    check_gamma(gamma);
    check_prior(P);
    if (gamma == 1.0) return delta_G(d, P);
    const double log_P = std::log(P), log_1mP = std::log1p(-P);
    double sum = 0.0;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        double za = d.pA(k) > 0 ? (log_P + std::log(d.pA(k))) / gamma : -inf;
        double zb = d.pB(k) > 0 ? (log_1mP + std::log(d.pB(k))) / gamma : -inf;
        sum += std::exp(gamma * logadd(za, zb));
    }
    return (sum - 1.0) / (1.0 - gamma);
}

IsoLogOddsMap::IsoLogOddsMap(const PmfPair& d, double gamma) : gamma_(gamma) {
    check_gamma(gamma);
    if (gamma == 1.0)
        throw DomainError("the log-utility case is handled by its own fixed-point map");
    if (d.support_A.lo != d.support_B.lo || d.support_A.hi != d.support_B.hi)
        throw SupportMismatch("the isoelastic fixed-point map needs identical supports");
    double r_min = inf, r_max = -inf;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        double la = std::log(d.pA(k)), lb = std::log(d.pB(k));
        log_pA_.push_back(la);
        log_pB_.push_back(lb);
        r_min = std::min(r_min, la - lb);
        r_max = std::max(r_max, la - lb);
    }
    lambda_bar_ = (r_max - r_min) / 2;
}

double IsoLogOddsMap::contraction_bound() const { return std::tanh(lambda_bar_ / (2 * gamma_)); }

double IsoLogOddsMap::operator()(double theta) const {
    double num_lse = -inf, den_lse = -inf;
    for (std::size_t i = 0; i < log_pA_.size(); ++i) {
        const double la = log_pA_[i] / gamma_, lb = log_pB_[i] / gamma_;
        const double log_a = logadd(theta / (2 * gamma_) + la, -theta / (2 * gamma_) + lb);
        num_lse = logadd(num_lse, la + (gamma_ - 1) * log_a);
        den_lse = logadd(den_lse, lb + (gamma_ - 1) * log_a);
    }
    return -(gamma_ / (1 - gamma_)) * (num_lse - den_lse);
}

namespace {

// log-odds-parametrized splits: share on A after seeing k, stable in gamma
double split_at(const PmfPair& d, std::int64_t k, double theta, double gamma) {
    const double a = d.pA(k), b = d.pB(k);
    if (b == 0) return 1.0;
    if (a == 0) return 0.0;
    const double za = (-softplus(-theta) + std::log(a)) / gamma;
    const double zb = (-softplus(theta) + std::log(b)) / gamma;
    return std::exp(za - logadd(za, zb));
}

// sign of dU/dP at the P-optimal splits (envelope argument): the derivative
// is (T_A - T_B)/(1-gamma) with T_theta the scenario-conditional utility
// sums, compared here through their logs to survive extreme gamma
double gradient_sign(const PmfPair& d, double theta, double gamma) {
    const double log_P = -softplus(-theta), log_1mP = -softplus(theta);
    double L_A = -inf, L_B = -inf;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        const double a = d.pA(k), b = d.pB(k);
        const double za = a > 0 ? (log_P + std::log(a)) / gamma : -inf;
        const double zb = b > 0 ? (log_1mP + std::log(b)) / gamma : -inf;
        const double lse = logadd(za, zb);
        if (a > 0) L_A = logadd(L_A, std::log(a) + (1 - gamma) * (za - lse));
        if (b > 0) L_B = logadd(L_B, std::log(b) + (1 - gamma) * (zb - lse));
    }
    const double diff = (L_A - L_B) * (gamma < 1 ? 1.0 : -1.0);
    return diff == 0 ? 0.0 : (diff < 0 ? -1.0 : 1.0);
}

struct ScalarSolve {
    double theta = 0.0;
    double err = 0.0;
};

// golden-section narrowing on U followed by bisection on the derivative sign;
// sound because U is convex in P (pointwise max of linear functions)
ScalarSolve minimize_utility(const PmfPair& d, double gamma, double tol) {
    double lo = -60.0, hi = 60.0;
    constexpr double kGolden = 0.6180339887498949;
    double c1 = hi - kGolden * (hi - lo), c2 = lo + kGolden * (hi - lo);
    double f1 = expected_utility(d, sigmoid(c1), gamma);
    double f2 = expected_utility(d, sigmoid(c2), gamma);
    while (hi - lo > 1.0) {
        if (f1 < f2) {
            hi = c2;
            c2 = c1;
            f2 = f1;
            c1 = hi - kGolden * (hi - lo);
            f1 = expected_utility(d, sigmoid(c1), gamma);
        } else {
            lo = c1;
            c1 = c2;
            f1 = f2;
            c2 = lo + kGolden * (hi - lo);
            f2 = expected_utility(d, sigmoid(c2), gamma);
        }
    }
    if (!(gradient_sign(d, lo, gamma) < 0 && gradient_sign(d, hi, gamma) > 0)) {
        lo = -60.0; // narrowed bracket lost the sign change; restart wide
        hi = 60.0;
    }
    while ((hi - lo) / 2 > tol) {
        const double mid = (lo + hi) / 2;
        const double s = gradient_sign(d, mid, gamma);
        if (s == 0) return {mid, 0.0};
        (s < 0 ? lo : hi) = mid;
    }
    return {(lo + hi) / 2, (hi - lo) / 2};
}

IsoEquilibrium solve_iso_classified(const PmfPair& d, GameClass cls, bool swapped,
                                    double gamma, double tol) {
    check_gamma(gamma);
    IsoEquilibrium eq;
    eq.gamma = gamma;
    eq.game_class = cls;
    eq.swapped = swapped;
    eq.split_support = d.support_union;

    if (cls == GameClass::SureWinning) {
        for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k)
            eq.splits.push_back(d.pA(k) > 0 ? 1.0 : 0.0);
        eq.U_star = 0.0; // all-in on the revealed scenario keeps full capital
        return eq;
    }
    if (cls == GameClass::BlindGuessing) {
        eq.P_star = 0.5;
        eq.theta_star = 0.0;
        eq.splits.assign(static_cast<std::size_t>(d.support_union.size()), 0.5);
        eq.U_star = gamma == 1.0 ? delta_G(d, 0.5) : expected_utility(d, 0.5, gamma);
        return eq;
    }

    if (gamma == 1.0) {
        SolverConfig cfg;
        cfg.tol = tol;
        BettingEquilibrium b = solve_bayes(d, cfg);
        eq.P_star = b.P_star;
        eq.theta_star = b.theta_star;
        eq.splits = b.splits;
        eq.U_star = b.delta_G;
        eq.err_bound = b.err_bound;
        return eq;
    }

    ScalarSolve sol;
    bool solved = false;
    if (d.support_A.lo == d.support_B.lo && d.support_A.hi == d.support_B.hi) {
        IsoLogOddsMap Phi(d, gamma);
        const double kappa = Phi.contraction_bound();
        eq.contraction_bound = kappa;
        if (kappa < 0.999) {
            double theta = 0.0;
            for (int it = 0; it < 200000; ++it) {
                const double next = Phi(theta);
                const double err = std::abs(next - theta) * kappa / (1 - kappa);
                theta = next;
                if (err <= tol) {
                    sol = {theta, err};
                    solved = true;
                    break;
                }
            }
        }
        // a slope bound this close to 1 makes the iteration impractical; the
        // convex search below reaches the same fixed point
    }
    if (!solved) sol = minimize_utility(d, gamma, tol);

    eq.theta_star = sol.theta;
    eq.P_star = sigmoid(sol.theta);
    eq.err_bound = sol.err;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k)
        eq.splits.push_back(split_at(d, k, sol.theta, gamma));
    eq.U_star = expected_utility(d, *eq.P_star, gamma);
    return eq;
}

GameClass infer_class_from_pmfs(const PmfPair& d) {
    if (intersect(d.support_A, d.support_B).empty()) return GameClass::SureWinning;
    if (d.support_A.lo != d.support_B.lo || d.support_A.hi != d.support_B.hi)
        return GameClass::Nontrivial;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k)
        if (d.pA(k) != d.pB(k)) return GameClass::Nontrivial;
    return GameClass::BlindGuessing;
}

} // namespace

IsoEquilibrium solve_iso(const GameSpec& spec, double gamma, double tol) {
    GameSpec canon = spec.canonical();
    GameClass cls = classify(canon);
    PmfPair d = to_pmf_pair(hypergeom_pmfs(canon));
    return solve_iso_classified(d, cls, canon.swapped, gamma, tol);
}

IsoEquilibrium solve_iso(const PmfPair& d, double gamma, double tol) {
    return solve_iso_classified(d, infer_class_from_pmfs(d), false, gamma, tol);
}

UnificationReport gamma_to_zero_check(const GameSpec& spec,
                                      const std::vector<double>& gamma_grid) {
    if (gamma_grid.empty()) throw DomainError("the evaluation grid must be nonempty");
    GameSpec canon = spec.canonical();
    if (classify(canon) != GameClass::Nontrivial)
        throw Degenerate("the small-gamma limit is defined for nontrivial games");

    FisherEquilibrium fisher = solve_fisher(canon);
    if (!fisher.nu_star || *fisher.nu_star == Rational(0))
        throw Degenerate("threshold mixing weight is zero; the limit prior is an interval");

    UnificationReport rep;
    rep.P_fisher = to_double(*fisher.P_star);
    rep.nu_star = to_double(*fisher.nu_star);
    rep.theta_fisher = logit(rep.P_fisher);
    rep.slope_expected = logit(rep.nu_star);

    rep.gammas = gamma_grid;
    std::sort(rep.gammas.begin(), rep.gammas.end(), std::greater<>());
    PmfPair d = to_pmf_pair(hypergeom_pmfs(canon));
    const std::int64_t k_star = *fisher.k_star;
    for (double g : rep.gammas) {
        IsoEquilibrium e =
            solve_iso_classified(d, GameClass::Nontrivial, canon.swapped, g, 1e-12);
        rep.P_gamma.push_back(*e.P_star);
        rep.theta_gamma.push_back(*e.theta_star);
        rep.split_kstar.push_back(e.split(k_star));
    }
    rep.dev_P = std::abs(rep.P_gamma.back() - rep.P_fisher);
    rep.dev_split = std::abs(rep.split_kstar.back() - rep.nu_star);
    const std::size_t n = rep.gammas.size();
    if (n >= 2)
        rep.slope_fitted = (rep.theta_gamma[n - 2] - rep.theta_gamma[n - 1]) /
                           (rep.gammas[n - 2] - rep.gammas[n - 1]);
    else
        rep.slope_fitted = (rep.theta_gamma[0] - rep.theta_fisher) / rep.gammas[0];
    return rep;
}

double entropy_eu(const std::vector<double>& p, double gamma) {
    check_gamma(gamma);
    check_normalized(p);
    if (gamma == 1.0) return shannon(p);
    double lse = -inf;
    for (double v : p)
        if (v > 0) lse = logadd(lse, std::log(v) / gamma);
    return -std::expm1(gamma * lse) / (1.0 - gamma);
}

double entropy_renyi(const std::vector<double>& p, double alpha) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw DomainError("order must be positive");
    check_normalized(p);
    if (alpha == 1.0) return shannon(p);
    double lse = -inf;
    for (double v : p)
        if (v > 0) lse = logadd(lse, alpha * std::log(v));
    return lse / (1.0 - alpha);
}

double entropy_tsallis(const std::vector<double>& p, double q) {
    if (!(q > 0) || !std::isfinite(q)) throw DomainError("order must be positive");
    check_normalized(p);
    if (q == 1.0) return shannon(p);
    double lse = -inf;
    for (double v : p)
        if (v > 0) lse = logadd(lse, q * std::log(v));
    return std::expm1(lse) / (1.0 - q);
}

double conditional_entropy_eu(const PmfPair& d, double P, double gamma) {
    check_gamma(gamma);
    check_prior(P);
    const double log_P = std::log(P), log_1mP = std::log1p(-P);
    double acc = 0.0;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        const double ja = d.pA(k) > 0 ? log_P + std::log(d.pA(k)) : -inf;
        const double jb = d.pB(k) > 0 ? log_1mP + std::log(d.pB(k)) : -inf;
        const double log_m = logadd(ja, jb);
        double h;
        if (gamma == 1.0) {
            const double pa = std::exp(ja - log_m), pb = std::exp(jb - log_m);
            h = -xlogx(pa) - xlogx(pb);
        } else {
            const double lse = logadd((ja - log_m) / gamma, (jb - log_m) / gamma);
            h = -std::expm1(gamma * lse) / (1.0 - gamma);
        }
        acc += std::exp(log_m) * h;
    }
    return acc;
}

double conditional_entropy_renyi(const PmfPair& d, double P, double alpha) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw DomainError("order must be positive");
    check_prior(P);
    const double log_P = std::log(P), log_1mP = std::log1p(-P);
    double acc = 0.0;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        const double ja = d.pA(k) > 0 ? log_P + std::log(d.pA(k)) : -inf;
        const double jb = d.pB(k) > 0 ? log_1mP + std::log(d.pB(k)) : -inf;
        const double log_m = logadd(ja, jb);
        double h;
        if (alpha == 1.0) {
            const double pa = std::exp(ja - log_m), pb = std::exp(jb - log_m);
            h = -xlogx(pa) - xlogx(pb);
        } else {
            h = logadd(alpha * (ja - log_m), alpha * (jb - log_m)) / (1.0 - alpha);
        }
        acc += std::exp(log_m) * h;
    }
    return acc;
}

double conditional_entropy_tsallis(const PmfPair& d, double P, double q) {
    if (!(q > 0) || !std::isfinite(q)) throw DomainError("order must be positive");
    check_prior(P);
    std::vector<double> joint, marginal;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        joint.push_back(P * d.pA(k));
        joint.push_back((1 - P) * d.pB(k));
        marginal.push_back(P * d.pA(k) + (1 - P) * d.pB(k));
    }
    const double s_joint = entropy_tsallis(joint, q);
    const double s_x = entropy_tsallis(marginal, q);
    return (s_joint - s_x) / (1.0 + (1.0 - q) * s_x);
}

double divergence_eu(const std::vector<double>& p, const std::vector<double>& q,
                     double gamma) {
    check_gamma(gamma);
    if (p.size() != q.size()) throw DomainError("mismatched vector lengths");
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0 && q[i] == 0)
            throw SupportViolation("first argument has mass where the second has none");
    if (gamma == 1.0) {
        double kl = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] > 0) kl += p[i] * (std::log(p[i]) - std::log(q[i]));
        return kl;
    }
    double lse = -inf;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (q[i] == 0) continue;
        const double lq = std::log(q[i]);
        const double lp = safe_log(p[i]);
        lse = logadd(lse, lq + (lp - lq) / gamma);
    }
    return gamma / (1.0 - gamma) * lse;
}

EntropyCriteria prior_vs_entropy_criteria(const GameSpec& spec, double gamma) {
    check_gamma(gamma);
    GameSpec canon = spec.canonical();
    if (classify(canon) != GameClass::Nontrivial)
        throw Degenerate("entropy criteria need a nontrivial game");
    PmfPair d = to_pmf_pair(hypergeom_pmfs(canon));
    const double order = 1.0 / gamma;

    auto maximize = [&](auto&& f) {
        double lo = -60.0, hi = 60.0;
        constexpr double kGolden = 0.6180339887498949;
        double c1 = hi - kGolden * (hi - lo), c2 = lo + kGolden * (hi - lo);
        double f1 = f(sigmoid(c1)), f2 = f(sigmoid(c2));
        while (hi - lo > 1e-11) {
            if (f1 > f2) { // keep the larger side: maximization
                hi = c2;
                c2 = c1;
                f2 = f1;
                c1 = hi - kGolden * (hi - lo);
                f1 = f(sigmoid(c1));
            } else {
                lo = c1;
                c1 = c2;
                f1 = f2;
                c2 = lo + kGolden * (hi - lo);
                f2 = f(sigmoid(c2));
            }
        }
        return sigmoid((lo + hi) / 2);
    };

    EntropyCriteria out;
    out.P_eu = maximize([&](double P) { return conditional_entropy_eu(d, P, gamma); });
    out.P_renyi =
        maximize([&](double P) { return conditional_entropy_renyi(d, P, order); });
    out.P_tsallis =
        maximize([&](double P) { return conditional_entropy_tsallis(d, P, order); });
    return out;
}

} // namespace statgames
