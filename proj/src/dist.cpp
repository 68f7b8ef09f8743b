#include "statgames/dist.hpp"

#include "statgames/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace statgames {

namespace {

constexpr std::int64_t kMaxExactM = 10000;
constexpr std::int64_t kMaxDoubleExpN = 26; // 2^(2^26) already needs ~8 MiB of digits

SupportInterval scenario_support(std::int64_t N, std::int64_t K, std::int64_t M) {
    return SupportInterval{std::max<std::int64_t>(0, N - (M - K)), std::min(K, N)};
}

} // namespace

void GameSpec::validate() const {
    if (M < 0) throw InvalidSpec("M must be nonnegative");
    if (N < 0 || N > M) throw InvalidSpec("N must satisfy 0 <= N <= M");
    if (K_A < 0 || K_A > M) throw InvalidSpec("K_A must satisfy 0 <= K_A <= M");
    if (K_B < 0 || K_B > M) throw InvalidSpec("K_B must satisfy 0 <= K_B <= M");
    if (kind == GameKind::Statistical) {
        if (!gamma.has_value()) throw InvalidSpec("Statistical games need gamma");
        if (!(*gamma > 0.0) || !std::isfinite(*gamma))
            throw InvalidSpec("gamma must be finite and positive");
    } else if (gamma.has_value()) {
        throw InvalidSpec("gamma is only meaningful for Statistical games");
    }
}

GameSpec GameSpec::canonical() const {
    validate();
    GameSpec c = *this;
    if (K_A > K_B) {
        std::swap(c.K_A, c.K_B);
        c.swapped = !c.swapped;
    }
    return c;
}

SupportInterval intersect(const SupportInterval& a, const SupportInterval& b) {
    SupportInterval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (r.empty()) return SupportInterval{0, -1};
    return r;
}

ScenarioDistributions hypergeom_pmfs(const GameSpec& spec) {
    spec.validate();
    if (spec.M > kMaxExactM)
        throw InvalidSpec("exact pmfs limited to M <= " + std::to_string(kMaxExactM));

    ScenarioDistributions d;
    d.spec = spec;
    d.support_A = scenario_support(spec.N, spec.K_A, spec.M);
    d.support_B = scenario_support(spec.N, spec.K_B, spec.M);
    d.support_AB = intersect(d.support_A, d.support_B);
    d.support_union = SupportInterval{std::min(d.support_A.lo, d.support_B.lo),
                                      std::max(d.support_A.hi, d.support_B.hi)};

    const BigInt total = binomial(spec.M, spec.N);
    d.pmf_A.assign(static_cast<std::size_t>(spec.N) + 1, Rational(0));
    d.pmf_B.assign(static_cast<std::size_t>(spec.N) + 1, Rational(0));
    for (std::int64_t k = d.support_A.lo; k <= d.support_A.hi; ++k)
        d.pmf_A[static_cast<std::size_t>(k)] =
            Rational(binomial(spec.K_A, k) * binomial(spec.M - spec.K_A, spec.N - k), total);
    for (std::int64_t k = d.support_B.lo; k <= d.support_B.hi; ++k)
        d.pmf_B[static_cast<std::size_t>(k)] =
            Rational(binomial(spec.K_B, k) * binomial(spec.M - spec.K_B, spec.N - k), total);
    return d;
}

GameClass classify(const GameSpec& spec) {
    spec.validate();
    if (spec.K_A == spec.K_B || spec.N == 0) return GameClass::BlindGuessing;
    const SupportInterval a = scenario_support(spec.N, spec.K_A, spec.M);
    const SupportInterval b = scenario_support(spec.N, spec.K_B, spec.M);
    if (intersect(a, b).empty()) return GameClass::SureWinning;
    return GameClass::Nontrivial;
}

const char* to_string(GameClass c) {
    switch (c) {
        case GameClass::BlindGuessing: return "blind-guessing";
        case GameClass::SureWinning: return "sure-winning";
        case GameClass::Nontrivial: return "nontrivial";
    }
    return "?";
}

const char* to_string(GameKind k) {
    switch (k) {
        case GameKind::Fisher: return "fisher";
        case GameKind::Bayesian: return "bayes";
        case GameKind::Statistical: return "iso";
    }
    return "?";
}

ActionCounts action_counts(const GameSpec& spec) {
    spec.validate();
    const SupportInterval a = scenario_support(spec.N, spec.K_A, spec.M);
    const SupportInterval b = scenario_support(spec.N, spec.K_B, spec.M);
    const SupportInterval ab = intersect(a, b);
    const SupportInterval u{std::min(a.lo, b.lo), std::max(a.hi, b.hi)};

    ActionCounts counts;
    counts.sequences = binomial(spec.M, spec.K_A) + binomial(spec.M, spec.K_B);
    counts.invariant_policies = BigInt(1) << static_cast<unsigned>(spec.N + 1);
    counts.invariant_feasible = BigInt(1) << static_cast<unsigned>(u.size());
    counts.invariant_nondominated = BigInt(1) << static_cast<unsigned>(ab.size());

    if (spec.N > kMaxDoubleExpN)
        throw TooLarge("sample-indexed policy counts need 2^N digits; N is capped at " +
                       std::to_string(kMaxDoubleExpN));
    counts.sample_policies =
        binomial(spec.M, spec.N) * (BigInt(1) << static_cast<unsigned>(std::int64_t(1) << spec.N));
    std::uint64_t feasible_samples = 0;
    std::uint64_t free_samples = 0;
    for (std::int64_t k = u.lo; k <= u.hi; ++k) {
        const auto c = binomial(spec.N, k).convert_to<std::uint64_t>();
        feasible_samples += c;
        if (ab.contains(k)) free_samples += c;
    }
    counts.policies_feasible = BigInt(1) << static_cast<unsigned>(feasible_samples);
    counts.policies_nondominated = BigInt(1) << static_cast<unsigned>(free_samples);
    return counts;
}

PmfPair to_pmf_pair(const ScenarioDistributions& d) {
    PmfPair p;
    p.N = d.spec.N;
    p.support_A = d.support_A;
    p.support_B = d.support_B;
    p.support_AB = d.support_AB;
    p.support_union = d.support_union;
    p.pmf_A.resize(d.pmf_A.size());
    p.pmf_B.resize(d.pmf_B.size());
    for (std::size_t i = 0; i < d.pmf_A.size(); ++i) p.pmf_A[i] = to_double(d.pmf_A[i]);
    for (std::size_t i = 0; i < d.pmf_B.size(); ++i) p.pmf_B[i] = to_double(d.pmf_B[i]);
    return p;
}

namespace {

// log C(N,k) via log-Gamma; exact enough (~1e-15 relative) for binary64 pmfs.
double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

std::vector<double> binom_pmf_one(std::int64_t N, double x) {
    std::vector<double> p(static_cast<std::size_t>(N) + 1, 0.0);
    if (x == 0.0) {
        p[0] = 1.0;
        return p;
    }
    if (x == 1.0) {
        p[static_cast<std::size_t>(N)] = 1.0;
        return p;
    }
    for (std::int64_t k = 0; k <= N; ++k)
        p[static_cast<std::size_t>(k)] =
            std::exp(log_choose(N, k) + double(k) * std::log(x) +
                     double(N - k) * std::log1p(-x));
    return p;
}

} // namespace

PmfPair binom_pmfs(std::int64_t N, double x_A, double x_B) {
    if (N < 0) throw DomainError("binom_pmfs: N must be nonnegative");
    if (!(x_A > 0.0 && x_A < 1.0) || !(x_B > 0.0 && x_B < 1.0))
        throw InvalidFraction("binom_pmfs: rates must lie strictly between 0 and 1");

    PmfPair p;
    p.N = N;
    p.pmf_A = binom_pmf_one(N, x_A);
    p.pmf_B = binom_pmf_one(N, x_B);
    p.support_A = p.support_B = p.support_AB = p.support_union = SupportInterval{0, N};
    return p;
}

double tv_distance_hyper_binom(const GameSpec& spec, Scenario which) {
    spec.validate();
    if (spec.M < 2) throw DomainError("tv_distance_hyper_binom needs M >= 2");
    const std::int64_t K = (which == Scenario::A) ? spec.K_A : spec.K_B;
    const double x = double(K) / double(spec.M);

    const ScenarioDistributions d = hypergeom_pmfs(spec);
    const std::vector<Rational>& hyper = (which == Scenario::A) ? d.pmf_A : d.pmf_B;
    const std::vector<double> binom = binom_pmf_one(spec.N, x);

    double tv = 0.0;
    for (std::int64_t k = 0; k <= spec.N; ++k)
        tv += std::abs(to_double(hyper[static_cast<std::size_t>(k)]) -
                       binom[static_cast<std::size_t>(k)]);
    tv *= 0.5;

    const double upper = double(spec.N - 1) / double(spec.M - 1);
    if (tv > upper + 1e-12)
        throw std::logic_error("total variation exceeded (N-1)/(M-1)");
    if (spec.N >= 2 && K > 0 && K < spec.M) {
        const double lower = upper / 28.0;
        if (tv < lower - 1e-12)
            throw std::logic_error("total variation fell below (N-1)/(28(M-1))");
    }
    return tv;
}

} // namespace statgames
