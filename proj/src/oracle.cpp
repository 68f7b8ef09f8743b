#include "statgames/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "statgames/errors.hpp"
#include "logspace.hpp"

namespace statgames {

namespace {

constexpr std::int64_t kMaxColumns = 1000000;
constexpr std::int64_t kMaxRows = 1000000;
constexpr std::int64_t kMaxEntries = 20000000;

std::vector<std::vector<std::int64_t>> combinations(std::int64_t M, std::int64_t K) {
    std::vector<std::vector<std::int64_t>> out;
    if (K < 0 || K > M)
        return out;
    std::vector<std::int64_t> cur(static_cast<std::size_t>(K));
    for (std::int64_t i = 0; i < K; ++i)
        cur[static_cast<std::size_t>(i)] = i;
    while (true) {
        out.push_back(cur);
        std::int64_t i = K - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == M - K + i)
            --i;
        if (i < 0)
            break;
        ++cur[static_cast<std::size_t>(i)];
        for (std::int64_t j = i + 1; j < K; ++j)
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

// (c^(1-g) - 1)/(1-g) for integer g >= 2 and rational c > 0; exact.
Rational iso_utility_exact(const Rational& c, std::int64_t g) {
    Rational pow = 1;
    Rational inv = Rational(1) / c;
    for (std::int64_t i = 0; i < g - 1; ++i)
        pow *= inv;
    return (pow - 1) / Rational(1 - g);
}

void check_guards(const GameSpec& spec) {
    BigInt cols = binomial(spec.M, spec.K_A) + binomial(spec.M, spec.K_B);
    if (cols > kMaxColumns)
        throw TooLarge("oracle: chooser action set exceeds 10^6 sequences");
}

// Per-sampling view of one column: where the observation lands and what it
// forces. slot < 0 means the guess (or split) is forced to `forced`.
struct Observation {
    std::int64_t slot = -1;
    Scenario forced = Scenario::A;
};

struct Enumeration {
    UtilityMatrix m;
    std::vector<std::int64_t> slot_pow;  // policy-digit place values
    std::int64_t n_policies = 1;
};

Enumeration enumerate_core(const GameSpec& spec_in, PolicyMode mode) {
    GameSpec spec = spec_in.canonical();
    check_guards(spec);

    Enumeration e;
    UtilityMatrix& m = e.m;
    m.spec = spec;
    m.mode = mode;

    ScenarioDistributions sd = hypergeom_pmfs(spec);

    bool betting = spec.kind != GameKind::Fisher;
    std::int64_t base = 2;
    if (betting) {
        if (spec.kind == GameKind::Bayesian)
            throw DomainError(
                "enumerate_game: log utility of a rational capital is irrational, "
                "no exact matrix exists; certify through verify_bayes instead");
        double g = spec.gamma.value_or(0.0);
        if (!(g >= 2.0) || g != std::floor(g))
            throw DomainError(
                "enumerate_game: exact split-grid utilities need integer risk aversion >= 2");
        for (std::int64_t j = 1; j < 64; ++j)
            m.split_grid.push_back(Rational(j) / 64);
        base = static_cast<std::int64_t>(m.split_grid.size());
    }

    if (mode == PolicyMode::Full) {
        if (spec.N > 20)
            throw TooLarge("enumerate_game: 2^N observation patterns exceed the row guard");
        for (std::int64_t p = 0; p < (std::int64_t{1} << spec.N); ++p)
            m.policy_domain.push_back(p);
    } else {
        for (std::int64_t k = sd.support_AB.lo; k <= sd.support_AB.hi; ++k)
            m.policy_domain.push_back(k);
    }

    e.n_policies = 1;
    e.slot_pow.assign(m.policy_domain.size(), 0);
    for (std::size_t j = 0; j < m.policy_domain.size(); ++j) {
        e.slot_pow[j] = e.n_policies;
        if (e.n_policies > kMaxRows / base)
            throw TooLarge("enumerate_game: policy count exceeds the row guard");
        e.n_policies *= base;
    }

    m.samplings = combinations(spec.M, spec.N);
    std::int64_t rows =
        static_cast<std::int64_t>(m.samplings.size()) * e.n_policies;
    if (rows > kMaxRows)
        throw TooLarge("enumerate_game: row count exceeds 10^6");

    for (const auto& seq_positions : combinations(spec.M, spec.K_A)) {
        std::vector<bool> bits(static_cast<std::size_t>(spec.M), false);
        for (std::int64_t p : seq_positions)
            bits[static_cast<std::size_t>(p)] = true;
        m.columns.emplace_back(Scenario::A, bits);
    }
    for (const auto& seq_positions : combinations(spec.M, spec.K_B)) {
        std::vector<bool> bits(static_cast<std::size_t>(spec.M), false);
        for (std::int64_t p : seq_positions)
            bits[static_cast<std::size_t>(p)] = true;
        m.columns.emplace_back(Scenario::B, bits);
    }
    if (rows * m.cols() > kMaxEntries)
        throw TooLarge("enumerate_game: matrix entry count exceeds 2*10^7");

    // Where each (sampling, column) pair lands: a free policy slot, or a
    // forced guess where only one scenario could have produced the count.
    std::size_t S = m.samplings.size();
    std::vector<std::vector<Observation>> obs(S,
                                              std::vector<Observation>(m.columns.size()));
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t c = 0; c < m.columns.size(); ++c) {
            const auto& bits = m.columns[c].second;
            std::int64_t k = 0;
            std::int64_t pattern = 0;
            for (std::size_t j = 0; j < m.samplings[s].size(); ++j) {
                if (bits[static_cast<std::size_t>(m.samplings[s][j])]) {
                    ++k;
                    pattern |= std::int64_t{1} << j;
                }
            }
            Observation& o = obs[s][c];
            if (mode == PolicyMode::Full) {
                o.slot = pattern;
            } else if (sd.support_AB.contains(k)) {
                o.slot = k - sd.support_AB.lo;
            } else {
                o.slot = -1;
                o.forced = sd.support_A.contains(k) ? Scenario::A : Scenario::B;
            }
        }
    }

    m.u.assign(static_cast<std::size_t>(rows),
               std::vector<Rational>(m.columns.size()));
    std::int64_t g = betting ? static_cast<std::int64_t>(*spec.gamma) : 0;
    for (std::size_t s = 0; s < S; ++s) {
        for (std::int64_t pol = 0; pol < e.n_policies; ++pol) {
            auto& row = m.u[s * static_cast<std::size_t>(e.n_policies) +
                            static_cast<std::size_t>(pol)];
            for (std::size_t c = 0; c < m.columns.size(); ++c) {
                const Observation& o = obs[s][c];
                Scenario truth = m.columns[c].first;
                if (!betting) {
                    Scenario guess;
                    if (o.slot < 0)
                        guess = o.forced;
                    else
                        guess = ((pol >> o.slot) & 1) ? Scenario::B : Scenario::A;
                    row[c] = (guess == truth) ? 1 : 0;
                } else {
                    Rational share_A;
                    if (o.slot < 0)
                        share_A = (o.forced == Scenario::A) ? 1 : 0;
                    else
                        share_A = m.split_grid[static_cast<std::size_t>(
                            (pol / e.slot_pow[static_cast<std::size_t>(o.slot)]) % base)];
                    Rational kept = (truth == Scenario::A) ? share_A : 1 - share_A;
                    row[c] = iso_utility_exact(kept, g);
                }
            }
        }
    }
    return e;
}

// Column weights of the chooser mix: scenario probability spread uniformly
// over that scenario's sequences.
std::vector<Rational> chooser_weights(const UtilityMatrix& m, const Rational& P) {
    std::size_t n_A = 0;
    for (const auto& col : m.columns)
        if (col.first == Scenario::A)
            ++n_A;
    std::size_t n_B = m.columns.size() - n_A;
    std::vector<Rational> w(m.columns.size());
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
        if (m.columns[c].first == Scenario::A)
            w[c] = P / Rational(static_cast<std::int64_t>(n_A));
        else
            w[c] = (1 - P) / Rational(static_cast<std::int64_t>(n_B));
    }
    return w;
}

std::vector<Rational> row_values(const UtilityMatrix& m, const std::vector<Rational>& w) {
    std::vector<Rational> eu(static_cast<std::size_t>(m.rows()));
    for (std::size_t r = 0; r < eu.size(); ++r) {
        Rational acc = 0;
        for (std::size_t c = 0; c < m.columns.size(); ++c)
            acc += w[c] * m.u[r][c];
        eu[r] = acc;
    }
    return eu;
}

// Guesser equilibrium mix over policies: uniform sampling is implicit.
using PolicyMix = std::map<std::int64_t, Rational>;

std::vector<Rational> column_values(const UtilityMatrix& m, const Enumeration& e,
                                    const PolicyMix& mix) {
    std::size_t S = m.samplings.size();
    Rational inv_S = Rational(1) / Rational(static_cast<std::int64_t>(S));
    std::vector<Rational> eu(m.columns.size(), Rational(0));
    for (std::size_t s = 0; s < S; ++s) {
        for (const auto& [pol, weight] : mix) {
            const auto& row =
                m.u[s * static_cast<std::size_t>(e.n_policies) + static_cast<std::size_t>(pol)];
            for (std::size_t c = 0; c < m.columns.size(); ++c)
                eu[c] += inv_S * weight * row[c];
        }
    }
    return eu;
}

// Threshold policies as policy indices: guess B strictly above the threshold
// count, and below-or-at per the two boundary alternatives.
std::pair<std::int64_t, std::int64_t> threshold_policies(const UtilityMatrix& m,
                                                         std::int64_t k_star) {
    std::int64_t pol_A_at = 0, pol_B_at = 0;
    for (std::size_t j = 0; j < m.policy_domain.size(); ++j) {
        if (m.policy_domain[j] > k_star)
            pol_A_at |= std::int64_t{1} << j;
        if (m.policy_domain[j] >= k_star)
            pol_B_at |= std::int64_t{1} << j;
    }
    return {pol_A_at, pol_B_at};
}

[[noreturn]] void refute(const std::string& what) { throw Refuted(what); }

}  // namespace

UtilityMatrix enumerate_game(const GameSpec& spec, PolicyMode mode) {
    return enumerate_core(spec, mode).m;
}

Certificate verify_fisher(const GameSpec& spec_in, const FisherEquilibrium& eq) {
    GameSpec spec = spec_in.canonical();
    spec.kind = GameKind::Fisher;
    if (classify(spec) != GameClass::Nontrivial)
        throw DomainError("verify_fisher: only Nontrivial games have a threshold equilibrium");
    if (!eq.k_star || !eq.nu_star || !eq.P_star)
        throw DomainError("verify_fisher: equilibrium is missing threshold fields");

    Enumeration e = enumerate_core(spec, PolicyMode::Reduced);
    const UtilityMatrix& m = e.m;

    auto [pol_A_at, pol_B_at] = threshold_policies(m, *eq.k_star);
    PolicyMix mix;
    if (*eq.nu_star > 0)
        mix[pol_A_at] += *eq.nu_star;
    if (*eq.nu_star < 1)
        mix[pol_B_at] += 1 - *eq.nu_star;

    const Rational v = eq.v_star;
    std::vector<Rational> w2 = chooser_weights(m, *eq.P_star);
    std::vector<Rational> row_eu = row_values(m, w2);

    // Supported actions must all earn exactly the claimed rate.
    std::size_t S = m.samplings.size();
    for (std::size_t s = 0; s < S; ++s) {
        for (const auto& [pol, weight] : mix) {
            (void)weight;
            const Rational& got =
                row_eu[s * static_cast<std::size_t>(e.n_policies) + static_cast<std::size_t>(pol)];
            if (got != v)
                refute("verify_fisher: supported action earns " + to_fraction_string(got) +
                       ", claimed value " + to_fraction_string(v));
        }
    }

    // No action, supported or not, may beat it.
    Rational row_gap = row_eu.empty() ? Rational(0) : Rational(row_eu[0] - v);
    for (const Rational& eu : row_eu)
        row_gap = std::max(row_gap, Rational(eu - v));
    if (row_gap > 0)
        refute("verify_fisher: an excluded action wins more than the claimed value by " +
               to_fraction_string(row_gap));

    // Every chooser action must concede the same rate.
    std::vector<Rational> col_eu = column_values(m, e, mix);
    Rational col_gap = 0;
    for (const Rational& eu : col_eu) {
        Rational diff = eu >= v ? Rational(eu - v) : Rational(v - eu);
        col_gap = std::max(col_gap, diff);
    }
    if (col_gap > 0)
        refute("verify_fisher: chooser indifference breaks by " + to_fraction_string(col_gap));

    Certificate cert;
    cert.exact = true;
    cert.nash_ok = true;
    cert.value_exact = v;
    cert.value = to_double(v);
    cert.row_gap_exact = row_gap;
    cert.col_gap_exact = col_gap;
    cert.worst_row_gap = to_double(row_gap);
    cert.worst_col_gap = to_double(col_gap);
    return cert;
}

Rational game_value_lp_free(const GameSpec& spec_in) {
    GameSpec spec = spec_in.canonical();
    spec.kind = GameKind::Fisher;
    GameClass cls = classify(spec);
    Enumeration e = enumerate_core(spec, PolicyMode::Reduced);
    const UtilityMatrix& m = e.m;

    Rational P(1, 2);
    PolicyMix mix;
    if (cls == GameClass::Nontrivial) {
        FisherEquilibrium eq = solve_fisher(spec);
        P = *eq.P_star;
        auto [pol_A_at, pol_B_at] = threshold_policies(m, *eq.k_star);
        if (*eq.nu_star > 0)
            mix[pol_A_at] += *eq.nu_star;
        if (*eq.nu_star < 1)
            mix[pol_B_at] += 1 - *eq.nu_star;
    } else if (cls == GameClass::BlindGuessing) {
        // Coin flip between the constant guesses.
        std::int64_t all_B = e.n_policies - 1;
        mix[0] += Rational(1, 2);
        mix[all_B] += Rational(1, 2);
    } else {
        // Disjoint supports force every guess; the lone policy wins surely.
        mix[0] = 1;
    }

    std::vector<Rational> row_eu = row_values(m, chooser_weights(m, P));
    Rational best_row = row_eu[0];
    for (const Rational& eu : row_eu)
        best_row = std::max(best_row, eu);

    std::vector<Rational> col_eu = column_values(m, e, mix);
    Rational best_col = col_eu[0];
    for (const Rational& eu : col_eu)
        best_col = std::min(best_col, eu);

    if (best_row != best_col)
        refute("game_value_lp_free: best responses disagree, " + to_fraction_string(best_row) +
               " vs " + to_fraction_string(best_col));
    return best_row;
}

namespace {

// Shared certification of the capital-splitting equilibria (log utility is
// gamma = 1). All claims refer to retained capital fractions; the doubling
// payout is a positive affine shift of the utility and changes nothing.
struct SplitClaim {
    double gamma = 1.0;
    double P = 0.5;  // 1/2 stands in when the class leaves the prior free
    double err = 0.0;
    SupportInterval support;
    const std::vector<double>* splits = nullptr;
    double value = 0.0;  // claimed equilibrium expected utility
};

double split_value(const PmfPair& d, double P, double gamma) {
    return gamma == 1.0 ? delta_G(d, P) : expected_utility(d, P, gamma);
}

Certificate verify_split_claim(const GameSpec& spec_in, const SplitClaim& c, int grid) {
    GameSpec spec = spec_in.canonical();
    check_guards(spec);
    ScenarioDistributions sd = hypergeom_pmfs(spec);
    if (binomial(spec.M, spec.N) * (BigInt(1) << sd.support_AB.size()) > kMaxRows)
        throw TooLarge("oracle: game exceeds the certification guard");
    PmfPair d = to_pmf_pair(sd);
    if (grid < 1)
        throw DomainError("oracle: prior grid needs at least one point");

    const double g = c.gamma;
    const double P = c.P;

    // Reported splits must be the posterior best response at the reported
    // prior: (P p_A)^(1/g) / ((P p_A)^(1/g) + ((1-P) p_B)^(1/g)).
    double worst_split = 0.0;
    for (std::int64_t k = c.support.lo; k <= c.support.hi; ++k) {
        double pA = d.pA(k), pB = d.pB(k);
        if (pA == 0.0 && pB == 0.0)
            continue;
        double expect;
        if (pB == 0.0)
            expect = 1.0;
        else if (pA == 0.0)
            expect = 0.0;
        else {
            double zA = (std::log(P) + std::log(pA)) / g;
            double zB = (std::log1p(-P) + std::log(pB)) / g;
            expect = std::exp(zA - num::logadd(zA, zB));
        }
        double got = (*c.splits)[static_cast<std::size_t>(k - c.support.lo)];
        worst_split = std::max(worst_split, std::abs(got - expect));
    }
    if (worst_split > 1e-10)
        refute("verify split game: a reported split misses the best response by " +
               std::to_string(worst_split));

    // No prior on the scan grid may undercut the reported one beyond what the
    // certified log-odds error explains through the curvature.
    double v_claim = split_value(d, P, g);
    double curvature;
    if (g == 1.0) {
        curvature = delta_G_derivs(d, P).second;
    } else {
        double h = 1e-5;
        curvature = (split_value(d, std::min(P + h, 1.0 - 1e-9), g) -
                     2.0 * v_claim + split_value(d, std::max(P - h, 1e-9), g)) /
                    (h * h);
        curvature = std::max(curvature, 0.0);
    }
    double slack = curvature * c.err * c.err + 1e-12 * (1.0 + std::abs(v_claim));
    double grid_min = v_claim;
    for (int i = 0; i < grid; ++i) {
        double Pg = static_cast<double>(i + 1) / static_cast<double>(grid + 1);
        grid_min = std::min(grid_min, split_value(d, Pg, g));
    }
    double col_gap = v_claim - grid_min;
    if (col_gap > slack)
        refute("verify split game: a grid prior undercuts the reported one by " +
               std::to_string(col_gap));

    // Scenario indifference: at the equilibrium splits the chooser gains
    // nothing from either scenario.
    double U_A = 0.0, U_B = 0.0;
    for (std::int64_t k = c.support.lo; k <= c.support.hi; ++k) {
        double split = (*c.splits)[static_cast<std::size_t>(k - c.support.lo)];
        if (d.pA(k) > 0.0)
            U_A += d.pA(k) * isoelastic_utility(split, g);
        if (d.pB(k) > 0.0)
            U_B += d.pB(k) * isoelastic_utility(1.0 - split, g);
    }
    double indiff = std::abs(U_A - U_B);
    double indiff_tol = 1e-8 * (1.0 + std::abs(U_A) + std::abs(U_B));
    if (indiff > indiff_tol)
        refute("verify split game: scenario growths differ by " + std::to_string(indiff));

    // Claimed value must be the value at the claimed prior.
    if (std::abs(v_claim - c.value) > 1e-9 * (1.0 + std::abs(v_claim)))
        refute("verify split game: claimed value off by " +
               std::to_string(std::abs(v_claim - c.value)));

    // Coarse-grid sanity floor: no split of step 1/64 beats the closed form.
    double worst_grid_gain = 0.0;
    for (std::int64_t k = sd.support_AB.lo; k <= sd.support_AB.hi; ++k) {
        double pA = d.pA(k), pB = d.pB(k);
        auto contrib = [&](double s) {
            return P * pA * isoelastic_utility(s, g) +
                   (1.0 - P) * pB * isoelastic_utility(1.0 - s, g);
        };
        double claimed = contrib((*c.splits)[static_cast<std::size_t>(k - c.support.lo)]);
        for (int j = 1; j < 64; ++j)
            worst_grid_gain =
                std::max(worst_grid_gain, contrib(j / 64.0) - claimed);
    }
    if (worst_grid_gain > 1e-12)
        refute("verify split game: a 1/64-grid split beats the closed form by " +
               std::to_string(worst_grid_gain));

    Certificate cert;
    cert.exact = false;
    cert.nash_ok = true;
    cert.value = v_claim;
    cert.worst_row_gap = std::max(worst_split, worst_grid_gain);
    cert.worst_col_gap = std::max(col_gap, indiff);
    return cert;
}

}  // namespace

Certificate verify_bayes(const GameSpec& spec, const BettingEquilibrium& eq, int grid) {
    SplitClaim c;
    c.gamma = 1.0;
    c.P = eq.P_star.value_or(0.5);
    c.err = eq.err_bound;
    c.support = eq.split_support;
    c.splits = &eq.splits;
    c.value = eq.delta_G;
    return verify_split_claim(spec, c, grid);
}

Certificate verify_iso(const GameSpec& spec, const IsoEquilibrium& eq, int grid) {
    SplitClaim c;
    c.gamma = eq.gamma;
    c.P = eq.P_star.value_or(0.5);
    c.err = eq.err_bound;
    c.support = eq.split_support;
    c.splits = &eq.splits;
    c.value = eq.U_star;
    return verify_split_claim(spec, c, grid);
}

}  // namespace statgames
