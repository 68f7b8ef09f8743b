#pragma once

#include "statgames/dist.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace statgames {

enum class BettingMethod { Bisection, FixedPoint, Interval, Newton, Restricted, Auto };
const char* to_string(BettingMethod m);

struct SolverConfig {
    double tol = 1e-10; // target bound on |theta_hat - theta*| in log-odds nats
    int max_iter = 400;
    BettingMethod method = BettingMethod::Auto;
};

// Equilibrium of the capital-splitting game with log utility: the guesser
// splits her capital between the scenarios after seeing k, the chooser picks
// the scenario prior.
struct BettingEquilibrium {
    GameClass game_class = GameClass::Nontrivial;
    bool swapped = false;
    std::optional<double> P_star;     // chooser's scenario-A probability
    std::optional<double> theta_star; // log(P_star/(1-P_star))
    SupportInterval split_support;    // counts with defined splits (union support)
    std::vector<double> splits;       // capital share on A given k, aligned to split_support.lo
    double delta_G = 0.0;      // guesser's log-growth edge minus log 2 (nats, in [-log 2, 0])
    double G_over_log2 = 0.0;  // (log 2 + delta_G)/log 2
    double err_bound = 0.0;    // certified bound on |theta_star - exact| (nats)
    BettingMethod method_used = BettingMethod::Auto;
    int iterations = 0;
    std::optional<double> contraction_estimate; // restricted path: sup of observed step ratios

    double split(std::int64_t k) const {
        return splits[static_cast<std::size_t>(k - split_support.lo)];
    }
};

// Expected log-growth edge of the guesser at prior P, relative to the log 2
// baseline of an uninformed coin flip; equals minus the conditional Shannon
// entropy of the scenario given the observed count. Minimized at P_star.
double delta_G(const PmfPair& d, double P);

struct DeltaGDerivs {
    double first = 0.0;
    double second = 0.0; // strictly positive: delta_G is strictly convex
};
DeltaGDerivs delta_G_derivs(const PmfPair& d, double P);

// Fixed-point form of the stationarity condition delta_G'(P) = 0 on the
// log-odds line: theta* = F(theta*). |F'| <= contraction < 1 whenever the
// supports overlap, so every method below carries a certified error bound.
class LogOddsMap {
  public:
    explicit LogOddsMap(const PmfPair& d);

    double operator()(double theta) const;
    double derivative(double theta) const;

    double contraction() const { return q_; }       // total variation distance
    double second_derivative_bound() const { return q_ / 2; }
    double kl_AB() const { return kl_AB_; }         // D(A||B); +inf unless supp A is inside supp B
    double kl_BA() const { return kl_BA_; }         // D(B||A); +inf unless supp B is inside supp A

  private:
    std::vector<double> weight_, log_pA_, log_pB_;
    double entropy_diff_ = 0.0; // H_A - H_B
    double q_ = 1.0;
    double kl_AB_ = 0.0, kl_BA_ = 0.0;
};

// Support-rescaled change of variables for games whose scenario supports
// differ: chi = sqrt(Z_A/Z_B) log P - sqrt(Z_B/Z_A) log(1-P) with Z the
// overlap masses. The induced map is contractive in practice (validated per
// run); its fixed point maps back to theta*.
class RestrictedMap {
  public:
    explicit RestrictedMap(const PmfPair& d); // throws NotContractive if no overlap

    double operator()(double chi) const;
    double chi_of_logodds(double theta) const;
    double logodds_of_chi(double chi) const; // monotone inverse, solved to ~1e-15

    double range_lo() const { return range_lo_; } // image of R under the map
    double range_hi() const { return range_hi_; }

  private:
    std::vector<double> weight_, log_pA_, log_pB_;
    double scale_A_ = 1.0, scale_B_ = 1.0; // sqrt(Z_A/Z_B), sqrt(Z_B/Z_A)
    double inv_norm_ = 1.0;                // 1/sqrt(Z_A Z_B)
    double entropy_diff_ = 0.0;            // restricted H_A - H_B
    double range_lo_ = 0.0, range_hi_ = 0.0;
};

// Solve using the configured method (Auto picks restricted/fixed-point by
// support shape, refines with guarded Newton, and falls back to bisection).
BettingEquilibrium solve_bayes(const GameSpec& spec, const SolverConfig& cfg = {});

// Same solver on explicit pmfs (e.g. binomial limit games); the game class is
// inferred from the supports and pmf equality.
BettingEquilibrium solve_bayes(const PmfPair& d, const SolverConfig& cfg = {});

} // namespace statgames
