#include "statgames/cli.hpp"
#include "statgames/errors.hpp"
#include "statgames/fisher.hpp"
#include "statgames/oracle.hpp"

#include "report.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace statgames::cli {

namespace {

GameKind kind_from(const std::string& s) {
    if (s == "fisher") return GameKind::Fisher;
    if (s == "bayes") return GameKind::Bayesian;
    return GameKind::Statistical;
}

BettingMethod method_from(const std::string& s) {
    if (s == "bisection") return BettingMethod::Bisection;
    if (s == "fixed-point") return BettingMethod::FixedPoint;
    if (s == "interval") return BettingMethod::Interval;
    if (s == "newton") return BettingMethod::Newton;
    if (s == "restricted") return BettingMethod::Restricted;
    return BettingMethod::Auto;
}

std::string game_tag(const GameSpec& s) {
    return "G(" + std::to_string(s.N) + "," + std::to_string(s.K_A) + "," +
           std::to_string(s.K_B) + "," + std::to_string(s.M) + ")";
}

// Writes the whole body or nothing: a failed write is removed from disk.
int write_file(const std::string& path, const std::string& body, std::string& err) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        err += "error: cannot open " + path + " for writing\n";
        return 1;
    }
    f << body;
    f.flush();
    if (!f) {
        f.close();
        std::remove(path.c_str());
        err += "error: write to " + path + " failed; partial output removed\n";
        return 1;
    }
    return 0;
}

} // namespace

int run_verify_suite(const VerifySuiteOptions& o, std::string& out_text) {
    std::ostringstream out;

    if (o.perturb) {
        // nudge the threshold mixing weight of the first nontrivial game and
        // demand that the oracle notices
        for (std::int64_t M = 1; M <= o.max_M; ++M)
            for (std::int64_t N = 1; N <= M; ++N)
                for (std::int64_t KA = 0; KA <= M; ++KA)
                    for (std::int64_t KB = 0; KB <= M; ++KB) {
                        GameSpec spec{N, KA, KB, M, GameKind::Fisher, std::nullopt, false};
                        if (classify(spec) != GameClass::Nontrivial) continue;
                        FisherEquilibrium eq = solve_fisher(spec);
                        eq.nu_star = *eq.nu_star + Rational(1, 100);
                        try {
                            verify_fisher(spec, eq);
                            out << game_tag(spec)
                                << " perturbed mixing weight escaped the oracle\n";
                            out_text = out.str();
                            return 1;
                        } catch (const Refuted& e) {
                            out << game_tag(spec) << " perturbed nu* refuted: " << e.what()
                                << "\n";
                            out_text = out.str();
                            return 2;
                        }
                    }
        out << "no nontrivial game within --max-M " << o.max_M << " to perturb\n";
        out_text = out.str();
        return 1;
    }

    int exit_code = 0;
    long games = 0, nontrivial = 0, blind = 0, sure = 0, refuted = 0, skipped = 0;

    auto check_game = [&](const GameSpec& fspec) {
        ++games;
        const std::string tag = game_tag(fspec);
        try {
            const FisherEquilibrium eq = solve_fisher(fspec);
            switch (eq.game_class) {
            case GameClass::Nontrivial: ++nontrivial; break;
            case GameClass::BlindGuessing: ++blind; break;
            case GameClass::SureWinning: ++sure; break;
            }
            const Rational v = game_value_lp_free(fspec);
            if (v != eq.v_star)
                throw Refuted("closed-form value " + to_fraction_string(eq.v_star) +
                              " disagrees with the enumerated value " +
                              to_fraction_string(v));
            std::string line = tag + " " + to_string(eq.game_class) +
                               " v*=" + to_fraction_string(eq.v_star) + " value=ok";
            if (eq.game_class == GameClass::Nontrivial) {
                verify_fisher(fspec, eq);
                line += " matrix=ok";
            }
            if (eq.game_class != GameClass::SureWinning) {
                // the betting variant has a well-posed prior here; certify it too
                GameSpec bspec = fspec;
                bspec.kind = GameKind::Bayesian;
                verify_bayes(bspec, solve_bayes(bspec));
                line += " betting=ok";
            }
            out << line << "\n";
        } catch (const TooLarge& e) {
            ++skipped;
            out << tag << " skipped: " << e.what() << "\n";
        } catch (const Refuted& e) {
            ++refuted;
            exit_code = 2;
            out << tag << " REFUTED: " << e.what() << "\n";
        }
    };

    for (std::int64_t M = 1; M <= o.max_M; ++M)
        for (std::int64_t N = 1; N <= M; ++N)
            for (std::int64_t KA = 0; KA <= M; ++KA)
                for (std::int64_t KB = 0; KB <= M; ++KB)
                    check_game({N, KA, KB, M, GameKind::Fisher, std::nullopt, false});

    if (o.seed) {
        // a few larger games sampled above the exhaustive range; plain modulo
        // keeps the draw identical across standard libraries
        std::mt19937_64 rng(*o.seed);
        for (int i = 0; i < 5; ++i) {
            const std::int64_t M = o.max_M + 1 + static_cast<std::int64_t>(rng() % 4u);
            const std::int64_t N =
                1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(M));
            const std::int64_t KA =
                static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(M + 1));
            const std::int64_t KB =
                static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(M + 1));
            check_game({N, KA, KB, M, GameKind::Fisher, std::nullopt, false});
        }
    }

    out << "suite: " << games << " games, " << nontrivial << " nontrivial, " << blind
        << " blind-guessing, " << sure << " sure-winning, " << refuted << " refuted, "
        << skipped << " skipped\n";
    out_text = out.str();
    return exit_code;
}

CliResult run(const std::vector<std::string>& args) {
    CliResult res;

    CLI::App app{"equilibrium solvers for sampling-and-guessing games"};
    app.name("statgames");
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "solve one game and print a JSON report");
    SolveOptions so;
    std::string solve_game;
    std::string method_str = "auto";
    double solve_gamma = 0.0;
    solve->add_option("--game", solve_game, "fisher | bayes | iso")
        ->required()
        ->check(CLI::IsMember({"fisher", "bayes", "iso"}));
    solve->add_option("--N", so.N, "sample size")->required();
    solve->add_option("--KA", so.K_A, "marked bits in scenario A")->required();
    solve->add_option("--KB", so.K_B, "marked bits in scenario B")->required();
    solve->add_option("--M", so.M, "sequence length")->required();
    auto* gamma_opt =
        solve->add_option("--gamma", solve_gamma, "relative risk aversion (iso only)");
    solve->add_option("--tol", so.tol, "target bound on the log-odds error")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    solve
        ->add_option("--method", method_str,
                     "bayes only: auto | bisection | fixed-point | interval | newton | "
                     "restricted")
        ->capture_default_str()
        ->check(CLI::IsMember(
            {"auto", "bisection", "fixed-point", "interval", "newton", "restricted"}));
    solve->add_flag("--verify", so.verify, "certify against the enumeration oracle");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "write a grid sweep to a JSON or CSV file");
    SweepRequest sr;
    std::string sweep_game, sweep_table, sweep_out;
    std::string sweep_format = "csv";
    std::int64_t sweep_N = 0, sweep_M = 0;
    double sweep_step = 0.0, sweep_gamma = 0.0;
    sweep->add_option("--game", sweep_game, "fisher | bayes | iso")
        ->check(CLI::IsMember({"fisher", "bayes", "iso"}));
    sweep->add_option("--table", sweep_table, "fisher-policy | bayes-prior")
        ->check(CLI::IsMember({"fisher-policy", "bayes-prior"}));
    auto* n_opt = sweep->add_option("--N", sweep_N, "sample size");
    auto* m_opt = sweep->add_option("--M", sweep_M, "sequence length (K_A, K_B run over 0..M)");
    auto* step_opt = sweep->add_option("--x-step", sweep_step, "binomial rate grid step");
    auto* sgamma_opt =
        sweep->add_option("--gamma", sweep_gamma, "relative risk aversion (iso only)");
    sweep->add_option("--format", sweep_format, "csv | json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--jobs", sr.jobs, "worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_out, "output path")->required();

    // strategy-plot
    auto* plot =
        app.add_subcommand("strategy-plot", "write the equilibrium tile diagram as SVG");
    std::int64_t pN = 0, pKA = 0, pKB = 0, pM = 0;
    std::string plot_out;
    plot->add_option("--N", pN, "sample size")->required();
    plot->add_option("--KA", pKA, "marked bits in scenario A")->required();
    plot->add_option("--KB", pKB, "marked bits in scenario B")->required();
    plot->add_option("--M", pM, "sequence length")->required();
    plot->add_option("--out", plot_out, "output path")->required();

    // verify-suite
    auto* suite = app.add_subcommand("verify-suite",
                                     "oracle-certify the exhaustive small-game set");
    VerifySuiteOptions vo;
    std::uint64_t seed_val = 0;
    suite->add_option("--max-M", vo.max_M, "largest sequence length")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    suite->add_flag("--perturb", vo.perturb, "inject a fault and demand a refutation");
    auto* seed_opt =
        suite->add_option("--seed", seed_val, "also certify a few random larger games");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream out, err;
        const int code = app.exit(e, out, err);
        res.out = out.str();
        res.err = err.str();
        res.exit_code = code == 0 ? 0 : 1;
        return res;
    }

    try {
        if (solve->parsed()) {
            so.kind = kind_from(solve_game);
            so.method = method_from(method_str);
            if (gamma_opt->count() > 0) so.gamma = solve_gamma;
            if (so.kind == GameKind::Statistical && !so.gamma)
                throw InvalidSpec("--game iso needs --gamma");
            if (so.kind != GameKind::Statistical && so.gamma)
                throw InvalidSpec("--gamma is only meaningful with --game iso");
            if (so.kind != GameKind::Bayesian && method_str != "auto")
                throw InvalidSpec("--method applies to --game bayes");
            bool refuted = false;
            const nlohmann::ordered_json report = solve_report(so, refuted);
            res.out = report.dump(2) + "\n";
            if (refuted) res.exit_code = 2;
        } else if (sweep->parsed()) {
            const bool has_game = sweep->count("--game") > 0;
            const bool has_table = sweep->count("--table") > 0;
            if (has_game == has_table)
                throw InvalidSpec("pass exactly one of --game and --table");
            if (has_table) {
                if (n_opt->count() || m_opt->count() || step_opt->count() ||
                    sgamma_opt->count())
                    throw InvalidSpec("table sweeps take no grid parameters");
                sr.axis = sweep_table == "fisher-policy"
                              ? SweepRequest::Axis::FisherPolicyTable
                              : SweepRequest::Axis::BayesPriorTable;
            } else {
                sr.kind = kind_from(sweep_game);
                if (n_opt->count() == 0) throw InvalidSpec("grid sweeps need --N");
                if ((m_opt->count() > 0) == (step_opt->count() > 0))
                    throw InvalidSpec("pass exactly one of --M and --x-step");
                sr.N = sweep_N;
                if (m_opt->count() > 0) {
                    sr.axis = SweepRequest::Axis::KGrid;
                    sr.M = sweep_M;
                } else {
                    sr.axis = SweepRequest::Axis::XGrid;
                    sr.x_step = sweep_step;
                }
                if (sgamma_opt->count() > 0) sr.gamma = sweep_gamma;
            }
            sr.format = sweep_format == "json" ? SweepFormat::Json : SweepFormat::Csv;
            const std::string body = run_sweep(sr);
            res.exit_code = write_file(sweep_out, body, res.err);
        } else if (plot->parsed()) {
            const GameSpec spec{pN, pKA, pKB, pM, GameKind::Fisher, std::nullopt, false};
            const std::string body = strategy_plot_svg(spec);
            res.exit_code = write_file(plot_out, body, res.err);
        } else {
            if (seed_opt->count() > 0) vo.seed = seed_val;
            res.exit_code = run_verify_suite(vo, res.out);
        }
    } catch (const Refuted& e) {
        res.err += std::string("refuted: ") + e.what() + "\n";
        res.exit_code = 2;
    } catch (const std::exception& e) {
        res.err += std::string("error: ") + e.what() + "\n";
        res.exit_code = 1;
    }
    return res;
}

} // namespace statgames::cli
