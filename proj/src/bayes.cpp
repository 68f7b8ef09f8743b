#include "statgames/bayes.hpp"

#include "statgames/errors.hpp"

#include "logspace.hpp"

#include <algorithm>
#include <cmath>

namespace statgames {

namespace {

constexpr double kInf = num::inf;
using num::logadd;
using num::safe_log;
using num::sigmoid;
using num::softplus;
using num::xlogx;

struct MethodResult {
    double theta = 0.0;
    double err = 0.0;
    int iterations = 0;
    BettingMethod used = BettingMethod::Auto;
    std::optional<double> contraction;
};

bool supports_overlap(const PmfPair& d) {
    return !intersect(d.support_A, d.support_B).empty();
}

bool supports_equal(const PmfPair& d) {
    return d.support_A.lo == d.support_B.lo && d.support_A.hi == d.support_B.hi;
}

} // namespace

const char* to_string(BettingMethod m) {
    switch (m) {
    case BettingMethod::Bisection: return "bisection";
    case BettingMethod::FixedPoint: return "fixed-point";
    case BettingMethod::Interval: return "interval";
    case BettingMethod::Newton: return "newton";
    case BettingMethod::Restricted: return "restricted";
    case BettingMethod::Auto: return "auto";
    }
    return "?";
}

double delta_G(const PmfPair& d, double P) {
    if (P < 0 || P > 1 || !std::isfinite(P)) throw DomainError("prior must lie in [0, 1]");
    double mix_entropy = 0.0, cond_A = 0.0, cond_B = 0.0;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        double a = d.pA(k), b = d.pB(k);
        cond_A += xlogx(a);
        cond_B += xlogx(b);
        mix_entropy += xlogx(P * a + (1 - P) * b);
    }
    return xlogx(P) + xlogx(1 - P) + P * cond_A + (1 - P) * cond_B - mix_entropy;
}

DeltaGDerivs delta_G_derivs(const PmfPair& d, double P) {
    if (!(P > 0 && P < 1)) throw DomainError("derivatives need a prior in (0, 1)");
    DeltaGDerivs out;
    double entropy_diff = 0.0, cross = 0.0, curve = 0.0;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        double a = d.pA(k), b = d.pB(k);
        double m = P * a + (1 - P) * b;
        entropy_diff += xlogx(b) - xlogx(a); // H_A - H_B
        if (m > 0) {
            cross += (a - b) * std::log(m);
            curve += a * b / m;
        }
    }
    out.first = std::log(P) - std::log1p(-P) - entropy_diff - cross;
    out.second = curve / (P * (1 - P));
    return out;
}

LogOddsMap::LogOddsMap(const PmfPair& d) {
    std::size_t n = static_cast<std::size_t>(d.support_union.size());
    weight_.reserve(n);
    log_pA_.reserve(n);
    log_pB_.reserve(n);
    double abs_sum = 0.0;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        double a = d.pA(k), b = d.pB(k);
        weight_.push_back(a - b);
        log_pA_.push_back(safe_log(a));
        log_pB_.push_back(safe_log(b));
        abs_sum += std::abs(a - b);
        entropy_diff_ += xlogx(b) - xlogx(a);
        if (a > 0) kl_AB_ += b > 0 ? a * std::log(a / b) : kInf;
        if (b > 0) kl_BA_ += a > 0 ? b * std::log(b / a) : kInf;
    }
    q_ = abs_sum / 2;
}

double LogOddsMap::operator()(double theta) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < weight_.size(); ++i) {
        if (weight_[i] == 0) continue;
        sum += weight_[i] * logadd(theta / 2 + log_pA_[i], -theta / 2 + log_pB_[i]);
    }
    return entropy_diff_ + sum;
}

double LogOddsMap::derivative(double theta) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < weight_.size(); ++i) {
        if (weight_[i] == 0) continue;
        double t;
        if (log_pB_[i] == -kInf) t = 1.0;
        else if (log_pA_[i] == -kInf) t = -1.0;
        else t = std::tanh((theta + log_pA_[i] - log_pB_[i]) / 2);
        sum += weight_[i] * t;
    }
    return sum / 2;
}

namespace {

MethodResult run_bisection(const LogOddsMap& F, const SolverConfig& cfg) {
    MethodResult r;
    r.used = BettingMethod::Bisection;
    // theta - F(theta) is strictly increasing (slope >= 1 - q > 0)
    double lo = -1.0, hi = 1.0;
    while (lo - F(lo) > 0) { lo *= 2; if (lo < -1e12) throw NoConvergence("no lower bracket"); }
    while (hi - F(hi) < 0) { hi *= 2; if (hi > 1e12) throw NoConvergence("no upper bracket"); }
    while ((hi - lo) / 2 > cfg.tol && r.iterations < cfg.max_iter) {
        double mid = (lo + hi) / 2;
        (mid - F(mid) < 0 ? lo : hi) = mid;
        ++r.iterations;
    }
    r.theta = (lo + hi) / 2;
    r.err = (hi - lo) / 2;
    if (r.err > cfg.tol) throw NoConvergence("bisection hit the iteration cap");
    return r;
}

MethodResult run_fixed_point(const PmfPair& d, const LogOddsMap& F, const SolverConfig& cfg) {
    if (!supports_overlap(d))
        throw NotContractive("fixed-point iteration needs overlapping scenario supports");
    MethodResult r;
    r.used = BettingMethod::FixedPoint;
    double q = F.contraction();
    double theta = 0.0;
    while (r.iterations < cfg.max_iter) {
        double next = F(theta);
        ++r.iterations;
        r.err = std::abs(next - theta) / (1 - q);
        theta = next;
        if (r.err <= cfg.tol) { r.theta = theta; return r; }
    }
    throw NoConvergence("fixed-point iteration hit the iteration cap");
}

MethodResult run_interval(const PmfPair& d, const LogOddsMap& F, const SolverConfig& cfg) {
    if (!supports_equal(d))
        throw SupportMismatch("interval refinement needs identical scenario supports");
    MethodResult r;
    r.used = BettingMethod::Interval;
    double q = F.contraction();
    double Q = F.second_derivative_bound();
    double lo = -F.kl_AB(), hi = F.kl_BA();
    while ((hi - lo) / 2 > cfg.tol) {
        if (r.iterations++ >= cfg.max_iter) throw NoConvergence("interval refinement stalled");
        double mid = (lo + hi) / 2, rad = (hi - lo) / 2;
        double fm = F(mid);
        double cand_lo = fm - q * rad, cand_hi = fm + q * rad;
        // endpoint images are usable only when monotonicity is certified
        double slope_floor = std::min(F.derivative(lo), F.derivative(hi)) - Q * (hi - lo);
        if (slope_floor > 0) {
            cand_lo = std::max(cand_lo, F(lo));
            cand_hi = std::min(cand_hi, F(hi));
        }
        lo = std::max(lo, cand_lo);
        hi = std::min(hi, cand_hi);
        if (lo > hi) throw NoConvergence("interval refinement produced an empty interval");
    }
    r.theta = (lo + hi) / 2;
    r.err = (hi - lo) / 2;
    return r;
}

MethodResult run_newton(const PmfPair& d, const LogOddsMap& F, const SolverConfig& cfg,
                        double start) {
    if (!supports_overlap(d))
        throw NotContractive("guarded Newton needs overlapping scenario supports");
    MethodResult r;
    r.used = BettingMethod::Newton;
    // bracket around the start point; bisection warms up until the error
    // bound's guard inequality activates, then Newton steps take over
    double lo = start - 1, hi = start + 1;
    while (lo - F(lo) > 0) lo = start - 2 * (start - lo);
    while (hi - F(hi) < 0) hi = start + 2 * (hi - start);
    const double Q = F.second_derivative_bound();
    double theta = std::clamp(start, lo, hi);
    bool guard_ever_held = false;
    while (r.iterations < cfg.max_iter) {
        ++r.iterations;
        const double f = F(theta), fp = F.derivative(theta);
        const double gap = std::abs(theta - f);
        (theta - f < 0 ? lo : hi) = theta;
        const double denom = 1 - fp;
        const double s = 2 * Q * gap / (denom * denom);
        if (s <= 1) {
            guard_ever_held = true;
            // two-sided enclosure of theta* around the current iterate
            const double err = s < 1e-12 ? gap / denom
                                         : std::max((denom / Q) * (1 - std::sqrt(1 - s)),
                                                    (denom / Q) * (std::sqrt(1 + s) - 1));
            if (err <= cfg.tol) { r.theta = theta; r.err = err; return r; }
            const double next = (f - theta * fp) / denom;
            theta = (next > lo && next < hi) ? next : (lo + hi) / 2;
        } else {
            theta = (lo + hi) / 2;
        }
    }
    if (!guard_ever_held) throw GuardNotMet("Newton guard inequality never held");
    throw NoConvergence("guarded Newton hit the iteration cap");
}

} // namespace

RestrictedMap::RestrictedMap(const PmfPair& d) {
    SupportInterval both = intersect(d.support_A, d.support_B);
    if (both.empty())
        throw NotContractive("support-rescaled iteration needs overlapping scenario supports");
    double Z_A = 0.0, Z_B = 0.0;
    for (std::int64_t k = both.lo; k <= both.hi; ++k) {
        double a = d.pA(k), b = d.pB(k);
        weight_.push_back(a - b);
        log_pA_.push_back(safe_log(a));
        log_pB_.push_back(safe_log(b));
        Z_A += a;
        Z_B += b;
        entropy_diff_ += xlogx(b) - xlogx(a);
    }
    scale_A_ = std::sqrt(Z_A / Z_B);
    scale_B_ = std::sqrt(Z_B / Z_A);
    inv_norm_ = 1.0 / std::sqrt(Z_A * Z_B);
    double kl_AB = 0.0, kl_BA = 0.0;
    for (std::size_t i = 0; i < weight_.size(); ++i) {
        double a = std::exp(log_pA_[i]), b = std::exp(log_pB_[i]);
        if (a > 0 && b > 0) {
            kl_AB += a * (log_pA_[i] - log_pB_[i]);
            kl_BA += b * (log_pB_[i] - log_pA_[i]);
        }
    }
    range_lo_ = -inv_norm_ * kl_AB;
    range_hi_ = inv_norm_ * kl_BA;
}

double RestrictedMap::chi_of_logodds(double theta) const {
    return -scale_A_ * softplus(-theta) + scale_B_ * softplus(theta);
}

double RestrictedMap::logodds_of_chi(double chi) const {
    // chi_of_logodds is strictly increasing with slope in
    // [min(scale_A, scale_B), max(scale_A, scale_B)]; safeguarded Newton
    double lo = -1.0, hi = 1.0;
    while (chi_of_logodds(lo) > chi) lo *= 2;
    while (chi_of_logodds(hi) < chi) hi *= 2;
    double t = std::clamp(0.0, lo, hi);
    for (int it = 0; it < 200; ++it) {
        double val = chi_of_logodds(t) - chi;
        if (val > 0) hi = t; else lo = t;
        double slope = scale_A_ * sigmoid(-t) + scale_B_ * sigmoid(t);
        double step = val / slope;
        if (std::abs(step) <= 1e-15 * (1 + std::abs(t))) return t - step;
        t -= step;
        if (t <= lo || t >= hi) t = (lo + hi) / 2;
        if (hi - lo <= 1e-15 * (1 + std::abs(t))) break;
    }
    return t;
}

double RestrictedMap::operator()(double chi) const {
    double t = logodds_of_chi(chi);
    double log_P = -softplus(-t), log_1mP = -softplus(t);
    double sum = 0.0;
    for (std::size_t i = 0; i < weight_.size(); ++i) {
        if (weight_[i] == 0) continue;
        sum += weight_[i] * logadd(log_P + log_pA_[i], log_1mP + log_pB_[i]);
    }
    return inv_norm_ * (entropy_diff_ + sum);
}

namespace {

MethodResult run_restricted(const PmfPair& d, const LogOddsMap& F, const SolverConfig& cfg) {
    RestrictedMap R(d);
    MethodResult r;
    r.used = BettingMethod::Restricted;
    double chi = R.chi_of_logodds(0.0);
    double prev_step = -1.0;
    double ratio_sup = 0.0;
    while (r.iterations < cfg.max_iter) {
        double next = R(chi);
        ++r.iterations;
        double step = std::abs(next - chi);
        if (prev_step > 1e-14 * (1 + std::abs(chi)) && step > 0) {
            double ratio = step / prev_step;
            ratio_sup = std::max(ratio_sup, ratio);
            if (ratio >= 1.0) {
                // observed expansion: the contraction premise failed here,
                // fall back to the bracketing method
                MethodResult fb = run_bisection(F, cfg);
                fb.contraction = ratio_sup;
                return fb;
            }
        }
        prev_step = step;
        chi = next;
        if (ratio_sup > 0 && ratio_sup < 1) {
            double chi_err = step * ratio_sup / (1 - ratio_sup);
            double t = R.logodds_of_chi(chi);
            double t_lo = R.logodds_of_chi(chi - chi_err);
            double t_hi = R.logodds_of_chi(chi + chi_err);
            double err = std::max(t - t_lo, t_hi - t) + 1e-14 * (1 + std::abs(t));
            if (err <= cfg.tol) {
                r.theta = t;
                r.err = err;
                r.contraction = ratio_sup;
                return r;
            }
        } else if (step == 0 && prev_step == 0) {
            r.theta = R.logodds_of_chi(chi);
            r.err = 1e-14 * (1 + std::abs(r.theta));
            r.contraction = ratio_sup;
            return r;
        }
    }
    throw NoConvergence("support-rescaled iteration hit the iteration cap");
}

MethodResult run_auto(const PmfPair& d, const LogOddsMap& F, const SolverConfig& cfg) {
    MethodResult base;
    try {
        base = supports_equal(d) ? run_fixed_point(d, F, cfg) : run_restricted(d, F, cfg);
    } catch (const std::exception&) {
        base = run_bisection(F, cfg);
    }
    // a guarded Newton pass upgrades the bound to a theorem-backed one when
    // it applies; keep the primary answer otherwise
    try {
        SolverConfig refine = cfg;
        refine.max_iter = 40;
        MethodResult n = run_newton(d, F, refine, base.theta);
        if (n.err <= base.err) {
            n.iterations += base.iterations;
            n.contraction = base.contraction;
            return n;
        }
    } catch (const std::exception&) {
    }
    return base;
}

MethodResult dispatch(const PmfPair& d, const SolverConfig& cfg) {
    LogOddsMap F(d);
    switch (cfg.method) {
    case BettingMethod::Bisection: return run_bisection(F, cfg);
    case BettingMethod::FixedPoint: return run_fixed_point(d, F, cfg);
    case BettingMethod::Interval: return run_interval(d, F, cfg);
    case BettingMethod::Newton: return run_newton(d, F, cfg, 0.0);
    case BettingMethod::Restricted: return run_restricted(d, F, cfg);
    case BettingMethod::Auto: return run_auto(d, F, cfg);
    }
    throw InvalidSpec("unknown solver method");
}

GameClass infer_class(const PmfPair& d) {
    if (!supports_overlap(d)) return GameClass::SureWinning;
    if (!supports_equal(d)) return GameClass::Nontrivial;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k)
        if (d.pA(k) != d.pB(k)) return GameClass::Nontrivial;
    return GameClass::BlindGuessing;
}

BettingEquilibrium solve_classified(const PmfPair& d, GameClass cls, bool swapped,
                                    const SolverConfig& cfg) {
    BettingEquilibrium eq;
    eq.game_class = cls;
    eq.swapped = swapped;
    eq.split_support = d.support_union;
    eq.method_used = cfg.method;

    if (cls == GameClass::SureWinning) {
        // disjoint supports: every observation reveals the scenario, so the
        // guesser stakes everything and matches the log 2 baseline exactly
        for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k)
            eq.splits.push_back(d.pA(k) > 0 ? 1.0 : 0.0);
        eq.delta_G = 0.0;
        eq.G_over_log2 = 1.0;
        return eq;
    }
    if (cls == GameClass::BlindGuessing) {
        eq.P_star = 0.5;
        eq.theta_star = 0.0;
        eq.splits.assign(static_cast<std::size_t>(d.support_union.size()), 0.5);
        eq.delta_G = delta_G(d, 0.5);
        eq.G_over_log2 = (std::log(2.0) + eq.delta_G) / std::log(2.0);
        return eq;
    }

    MethodResult r = dispatch(d, cfg);
    eq.theta_star = r.theta;
    eq.P_star = sigmoid(r.theta);
    eq.err_bound = r.err;
    eq.method_used = r.used;
    eq.iterations = r.iterations;
    eq.contraction_estimate = r.contraction;
    for (std::int64_t k = d.support_union.lo; k <= d.support_union.hi; ++k) {
        double a = d.pA(k), b = d.pB(k);
        if (b == 0) eq.splits.push_back(1.0);
        else if (a == 0) eq.splits.push_back(0.0);
        else eq.splits.push_back(sigmoid(r.theta + std::log(a) - std::log(b)));
    }
    eq.delta_G = delta_G(d, *eq.P_star);
    eq.G_over_log2 = (std::log(2.0) + eq.delta_G) / std::log(2.0);
    return eq;
}

} // namespace

BettingEquilibrium solve_bayes(const GameSpec& spec, const SolverConfig& cfg) {
    GameSpec canon = spec.canonical();
    GameClass cls = classify(canon);
    PmfPair d = to_pmf_pair(hypergeom_pmfs(canon));
    return solve_classified(d, cls, canon.swapped, cfg);
}

BettingEquilibrium solve_bayes(const PmfPair& d, const SolverConfig& cfg) {
    return solve_classified(d, infer_class(d), false, cfg);
}

} // namespace statgames
