#pragma once

#include "statgames/dist.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace statgames {

// Isoelastic utility of a retained capital fraction: (c^(1-gamma) - 1)/(1-gamma),
// log(c) at gamma = 1. c = 0 yields -inf for gamma >= 1.
double isoelastic_utility(double c, double gamma);

// Guesser's expected utility at prior P when she splits optimally after each
// observed count; equals minus the conditional order-1/gamma expected-utility
// entropy of the scenario given the count. Strictly convex in P.
double expected_utility(const PmfPair& d, double P, double gamma);

// Equilibrium of the capital-splitting game with isoelastic utility.
struct IsoEquilibrium {
    double gamma = 1.0;
    GameClass game_class = GameClass::Nontrivial;
    bool swapped = false;
    std::optional<double> P_star;
    std::optional<double> theta_star; // log(P_star/(1-P_star))
    SupportInterval split_support;    // union support
    std::vector<double> splits;       // capital share on A given k
    double U_star = 0.0;              // equilibrium expected utility (utils)
    double err_bound = 0.0;           // bound on |theta_hat - theta*| (nats)
    // tanh(Lambda_bar/(2 gamma)) when the scenario supports coincide; the
    // slope bound of the fixed-point map used there
    std::optional<double> contraction_bound;

    double split(std::int64_t k) const {
        return splits[static_cast<std::size_t>(k - split_support.lo)];
    }
};

// Log-odds fixed-point map of the isoelastic equilibrium condition. Defined
// for games whose scenario supports coincide (SupportMismatch otherwise) and
// gamma != 1 (DomainError); its fixed point is theta*.
class IsoLogOddsMap {
  public:
    IsoLogOddsMap(const PmfPair& d, double gamma);

    double operator()(double theta) const;
    double lambda_bar() const { return lambda_bar_; }
    double contraction_bound() const; // tanh(lambda_bar/(2 gamma)) < 1

  private:
    std::vector<double> log_pA_, log_pB_;
    double gamma_ = 2.0;
    double lambda_bar_ = 0.0; // max over count pairs of |log-likelihood-ratio spread|/2
};

// gamma = 1 delegates to the logarithmic-utility solver; equal supports use
// the contraction map; otherwise 1-D convex minimization of expected utility.
IsoEquilibrium solve_iso(const GameSpec& spec, double gamma, double tol = 1e-10);
IsoEquilibrium solve_iso(const PmfPair& d, double gamma, double tol = 1e-10);

// Small-gamma limit check: the isoelastic equilibrium approaches the
// win/lose-game threshold equilibrium as risk aversion vanishes.
struct UnificationReport {
    std::vector<double> gammas;      // decreasing evaluation grid
    std::vector<double> P_gamma;     // P*_gamma along the grid
    std::vector<double> split_kstar; // split at the threshold count
    std::vector<double> theta_gamma; // log-odds along the grid
    double P_fisher = 0.0;           // limit prior (threshold game)
    double nu_star = 0.0;            // limit split (threshold mixing weight)
    double theta_fisher = 0.0;       // logit(P_fisher)
    double dev_P = 0.0;              // |P_gamma - P_fisher| at the finest gamma
    double dev_split = 0.0;          // |split - nu_star| at the finest gamma
    double slope_fitted = 0.0;       // d theta*/d gamma at 0, from the grid
    double slope_expected = 0.0;     // log(nu_star/(1-nu_star))
};
UnificationReport gamma_to_zero_check(const GameSpec& spec,
                                      const std::vector<double>& gamma_grid = {1e-2, 5e-3,
                                                                               2.5e-3});

// Generalized entropies of a probability vector (nats-compatible scale).
double entropy_eu(const std::vector<double>& p, double gamma); // (1 - ||p||_{1/gamma})/(1-gamma)
double entropy_renyi(const std::vector<double>& p, double alpha);
double entropy_tsallis(const std::vector<double>& p, double q);

// Conditional forms for the scenario-given-count joint law at prior P.
// Expected-utility and Renyi conditionals average the per-count entropy;
// the Tsallis conditional uses its quotient form.
double conditional_entropy_eu(const PmfPair& d, double P, double gamma);
double conditional_entropy_renyi(const PmfPair& d, double P, double alpha);
double conditional_entropy_tsallis(const PmfPair& d, double P, double q);

// (gamma/(1-gamma)) log(sum_k q_k (p_k/q_k)^{1/gamma}); KL divergence at
// gamma = 1; equals the Renyi divergence of order 1/gamma.
double divergence_eu(const std::vector<double>& p, const std::vector<double>& q, double gamma);

// Priors that maximize each conditional entropy (order 1/gamma), located by
// golden-section search; the expected-utility column reproduces the game's
// equilibrium prior.
struct EntropyCriteria {
    double P_eu = 0.0;
    double P_renyi = 0.0;
    double P_tsallis = 0.0;
};
EntropyCriteria prior_vs_entropy_criteria(const GameSpec& spec, double gamma);

} // namespace statgames
