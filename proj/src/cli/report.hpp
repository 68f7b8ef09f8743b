#pragma once

#include "statgames/bayes.hpp"
#include "statgames/cli.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace statgames::cli {

// Parsed flags of the solve subcommand.
struct SolveOptions {
    GameKind kind = GameKind::Fisher;
    std::int64_t N = 0;
    std::int64_t K_A = 0;
    std::int64_t K_B = 0;
    std::int64_t M = 0;
    std::optional<double> gamma;
    double tol = 1e-10;
    BettingMethod method = BettingMethod::Auto;
    bool verify = false;
};

// Solves one game and builds the JSON report. With verify set, attaches
// the oracle certificate; a refutation is reported inside the JSON and
// flagged through `refuted` instead of being thrown, so the caller can
// still print the report before exiting with status 2.
nlohmann::ordered_json solve_report(const SolveOptions& o, bool& refuted);

// Parsed flags of the verify-suite subcommand.
struct VerifySuiteOptions {
    std::int64_t max_M = 4;
    bool perturb = false;
    std::optional<std::uint64_t> seed;
};

// Runs oracle certification over the exhaustive game set with M <= max_M
// (plus a few seeded random larger games), one line per game. Returns the
// process exit code: 0 clean, 2 on any refutation.
int run_verify_suite(const VerifySuiteOptions& o, std::string& out);

} // namespace statgames::cli
