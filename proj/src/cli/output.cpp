#include "statgames/asymptotics.hpp"
#include "statgames/bayes.hpp"
#include "statgames/cli.hpp"
#include "statgames/errors.hpp"
#include "statgames/fisher.hpp"
#include "statgames/iso.hpp"
#include "statgames/oracle.hpp"

#include "report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace statgames::cli {

using nlohmann::ordered_json;

std::string format12(double v) {
    if (v == 0.0) v = 0.0; // collapse the negative-zero rendering
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) {
    if (!std::isfinite(v)) return v;
    return std::strtod(format12(v).c_str(), nullptr);
}

namespace {

constexpr std::int64_t kMaxPlotTiles = 200000;

ordered_json num_or_null(const std::optional<double>& v) {
    return v ? ordered_json(round12(*v)) : ordered_json(nullptr);
}

ordered_json int_or_null(const std::optional<std::int64_t>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json rat_or_null(const std::optional<Rational>& v) {
    return v ? ordered_json(round12(to_double(*v))) : ordered_json(nullptr);
}

void put_rational(ordered_json& o, const std::string& name, const Rational& r) {
    o[name] = round12(to_double(r));
    o[name + "_exact"] = to_fraction_string(r);
}

void put_opt_rational(ordered_json& o, const std::string& name,
                      const std::optional<Rational>& r) {
    if (r) {
        put_rational(o, name, *r);
    } else {
        o[name] = nullptr;
        o[name + "_exact"] = nullptr;
    }
}

ordered_json spec_json(const GameSpec& spec) {
    ordered_json j;
    j["N"] = spec.N;
    j["K_A"] = spec.K_A;
    j["K_B"] = spec.K_B;
    j["M"] = spec.M;
    if (spec.gamma) j["gamma"] = round12(*spec.gamma);
    return j;
}

template <class Equilibrium>
void put_split_columns(ordered_json& r, const Equilibrium& eq, std::int64_t N) {
    for (std::int64_t k = 0; k <= N; ++k) {
        const std::string key = "split_" + std::to_string(k);
        r[key] = eq.split_support.contains(k) ? ordered_json(round12(eq.split(k)))
                                              : ordered_json(nullptr);
    }
}

ordered_json splits_json(const BettingEquilibrium& eq) {
    ordered_json arr = ordered_json::array();
    for (std::int64_t k = eq.split_support.lo; k <= eq.split_support.hi; ++k) {
        ordered_json e;
        e["k"] = k;
        e["share_A"] = round12(eq.split(k));
        arr.push_back(std::move(e));
    }
    return arr;
}

ordered_json splits_json(const IsoEquilibrium& eq) {
    ordered_json arr = ordered_json::array();
    for (std::int64_t k = eq.split_support.lo; k <= eq.split_support.hi; ++k) {
        ordered_json e;
        e["k"] = k;
        e["share_A"] = round12(eq.split(k));
        arr.push_back(std::move(e));
    }
    return arr;
}

ordered_json certificate_json(const Certificate& c) {
    ordered_json j;
    j["nash_ok"] = c.nash_ok;
    j["exact"] = c.exact;
    j["value"] = round12(c.value);
    if (c.exact) j["value_exact"] = to_fraction_string(c.value_exact);
    j["worst_row_gap"] = round12(c.worst_row_gap);
    j["worst_col_gap"] = round12(c.worst_col_gap);
    if (c.exact) {
        j["row_gap_exact"] = to_fraction_string(c.row_gap_exact);
        j["col_gap_exact"] = to_fraction_string(c.col_gap_exact);
    }
    return j;
}

// Attaches either the certificate or the refutation to the report.
template <class Verify>
void attach_certificate(ordered_json& j, bool& refuted, const Verify& verify) {
    try {
        j["certificate"] = certificate_json(verify());
    } catch (const Refuted& e) {
        ordered_json cj;
        cj["nash_ok"] = false;
        cj["refuted"] = e.what();
        j["certificate"] = std::move(cj);
        refuted = true;
    }
}

void fisher_fields(ordered_json& j, const FisherEquilibrium& eq) {
    j["class"] = to_string(eq.game_class);
    j["degenerate"] = eq.game_class != GameClass::Nontrivial;
    j["swapped"] = eq.swapped;
    j["k_star"] = int_or_null(eq.k_star);
    put_opt_rational(j, "nu_star", eq.nu_star);
    put_opt_rational(j, "P_star", eq.P_star);
    put_rational(j, "v_star", eq.v_star);
    put_opt_rational(j, "s_star", eq.s_star);
    if (eq.prior_interval) {
        ordered_json pi;
        put_rational(pi, "lo", eq.prior_interval->first);
        put_rational(pi, "hi", eq.prior_interval->second);
        j["prior_interval"] = std::move(pi);
    } else {
        j["prior_interval"] = nullptr;
    }
}

void bayes_fields(ordered_json& j, const BettingEquilibrium& eq) {
    const bool solved = eq.game_class == GameClass::Nontrivial;
    j["class"] = to_string(eq.game_class);
    j["degenerate"] = !solved;
    j["swapped"] = eq.swapped;
    j["P_star"] = num_or_null(eq.P_star);
    j["theta_star"] = num_or_null(eq.theta_star);
    j["delta_G"] = round12(eq.delta_G);
    j["G_over_log2"] = round12(eq.G_over_log2);
    j["err_bound"] = round12(eq.err_bound);
    j["method"] = solved ? ordered_json(to_string(eq.method_used)) : ordered_json(nullptr);
    j["iterations"] = solved ? ordered_json(eq.iterations) : ordered_json(nullptr);
    j["contraction_estimate"] = num_or_null(eq.contraction_estimate);
    j["splits"] = splits_json(eq);
}

void iso_fields(ordered_json& j, const IsoEquilibrium& eq) {
    j["gamma"] = round12(eq.gamma);
    j["class"] = to_string(eq.game_class);
    j["degenerate"] = eq.game_class != GameClass::Nontrivial;
    j["swapped"] = eq.swapped;
    j["P_star"] = num_or_null(eq.P_star);
    j["theta_star"] = num_or_null(eq.theta_star);
    j["U_star"] = round12(eq.U_star);
    j["err_bound"] = round12(eq.err_bound);
    j["contraction_bound"] = num_or_null(eq.contraction_bound);
    j["splits"] = splits_json(eq);
}

} // namespace

ordered_json solve_report(const SolveOptions& o, bool& refuted) {
    refuted = false;
    GameSpec spec{o.N, o.K_A, o.K_B, o.M, o.kind, o.gamma, false};
    spec.validate();

    ordered_json j;
    j["command"] = "solve";
    j["game"] = to_string(o.kind);
    j["spec"] = spec_json(spec);

    switch (o.kind) {
    case GameKind::Fisher: {
        const FisherEquilibrium eq = solve_fisher(spec);
        fisher_fields(j, eq);
        if (o.verify) {
            attach_certificate(j, refuted, [&] {
                if (eq.game_class == GameClass::Nontrivial) return verify_fisher(spec, eq);
                // degenerate classes: certify by value agreement with the
                // enumerated game (the profile has no free parameters left)
                const Rational v = game_value_lp_free(spec);
                if (v != eq.v_star)
                    throw Refuted("closed-form value " + to_fraction_string(eq.v_star) +
                                  " disagrees with the enumerated value " +
                                  to_fraction_string(v));
                Certificate c;
                c.exact = true;
                c.nash_ok = true;
                c.value_exact = v;
                c.value = to_double(v);
                return c;
            });
        }
        break;
    }
    case GameKind::Bayesian: {
        SolverConfig cfg;
        cfg.tol = o.tol;
        cfg.method = o.method;
        const BettingEquilibrium eq = solve_bayes(spec, cfg);
        bayes_fields(j, eq);
        if (o.verify)
            attach_certificate(j, refuted, [&] { return verify_bayes(spec, eq); });
        break;
    }
    case GameKind::Statistical: {
        const IsoEquilibrium eq = solve_iso(spec, *o.gamma, o.tol);
        iso_fields(j, eq);
        if (o.verify)
            attach_certificate(j, refuted, [&] { return verify_iso(spec, eq); });
        break;
    }
    }
    return j;
}

void SweepRequest::validate() const {
    if (format == SweepFormat::Svg)
        throw InvalidSpec("sweep writes json or csv; svg belongs to the strategy-plot command");
    if (jobs < 1) throw InvalidSpec("jobs must be at least 1");
    switch (axis) {
    case Axis::KGrid: {
        GameSpec probe{N, 0, 0, M, kind, gamma, false};
        probe.validate(); // range checks plus the gamma/kind pairing
        break;
    }
    case Axis::XGrid: {
        if (N < 1) throw InvalidSpec("binomial sweeps need N >= 1");
        if (!(x_step > 0.0) || !(x_step < 1.0))
            throw InvalidSpec("x-step must lie strictly between 0 and 1");
        const bool wants_gamma = kind == GameKind::Statistical;
        if (wants_gamma && !gamma) throw InvalidSpec("isoelastic sweeps need gamma");
        if (!wants_gamma && gamma)
            throw InvalidSpec("gamma is only meaningful for isoelastic sweeps");
        if (gamma && (!(*gamma > 0.0) || !std::isfinite(*gamma)))
            throw InvalidSpec("gamma must be finite and positive");
        break;
    }
    case Axis::FisherPolicyTable:
    case Axis::BayesPriorTable:
        break; // fixed grid, no parameters
    }
}

namespace {

// K-grid records

ordered_json fisher_k_record(const SweepRequest& req, std::int64_t KA, std::int64_t KB) {
    GameSpec spec{req.N, KA, KB, req.M, GameKind::Fisher, std::nullopt, false};
    const FisherEquilibrium eq = solve_fisher(spec);
    ordered_json r;
    r["N"] = req.N;
    r["K_A"] = KA;
    r["K_B"] = KB;
    r["M"] = req.M;
    r["class"] = to_string(eq.game_class);
    r["degenerate"] = eq.game_class != GameClass::Nontrivial;
    r["conjecture"] = false;
    r["swapped"] = eq.swapped;
    r["k_star"] = int_or_null(eq.k_star);
    r["nu_star"] = rat_or_null(eq.nu_star);
    r["P_star"] = rat_or_null(eq.P_star);
    r["v_star"] = round12(to_double(eq.v_star));
    r["s_star"] = rat_or_null(eq.s_star);
    r["prior_lo"] = eq.prior_interval
                        ? ordered_json(round12(to_double(eq.prior_interval->first)))
                        : ordered_json(nullptr);
    r["prior_hi"] = eq.prior_interval
                        ? ordered_json(round12(to_double(eq.prior_interval->second)))
                        : ordered_json(nullptr);
    return r;
}

ordered_json bayes_k_record(const SweepRequest& req, std::int64_t KA, std::int64_t KB) {
    GameSpec spec{req.N, KA, KB, req.M, GameKind::Bayesian, std::nullopt, false};
    const BettingEquilibrium eq = solve_bayes(spec);
    const bool solved = eq.game_class == GameClass::Nontrivial;
    ordered_json r;
    r["N"] = req.N;
    r["K_A"] = KA;
    r["K_B"] = KB;
    r["M"] = req.M;
    r["class"] = to_string(eq.game_class);
    r["degenerate"] = !solved;
    r["conjecture"] = false;
    r["swapped"] = eq.swapped;
    r["P_star"] = num_or_null(eq.P_star);
    r["theta_star"] = num_or_null(eq.theta_star);
    r["delta_G"] = round12(eq.delta_G);
    r["G_over_log2"] = round12(eq.G_over_log2);
    r["err_bound"] = round12(eq.err_bound);
    r["method"] = solved ? ordered_json(to_string(eq.method_used)) : ordered_json(nullptr);
    r["iterations"] = solved ? ordered_json(eq.iterations) : ordered_json(nullptr);
    put_split_columns(r, eq, req.N);
    return r;
}

ordered_json iso_k_record(const SweepRequest& req, std::int64_t KA, std::int64_t KB) {
    GameSpec spec{req.N, KA, KB, req.M, GameKind::Statistical, req.gamma, false};
    const IsoEquilibrium eq = solve_iso(spec, *req.gamma);
    ordered_json r;
    r["N"] = req.N;
    r["K_A"] = KA;
    r["K_B"] = KB;
    r["M"] = req.M;
    r["gamma"] = round12(eq.gamma);
    r["class"] = to_string(eq.game_class);
    r["degenerate"] = eq.game_class != GameClass::Nontrivial;
    r["conjecture"] = false;
    r["swapped"] = eq.swapped;
    r["P_star"] = num_or_null(eq.P_star);
    r["theta_star"] = num_or_null(eq.theta_star);
    r["U_star"] = round12(eq.U_star);
    r["err_bound"] = round12(eq.err_bound);
    r["contraction_bound"] = num_or_null(eq.contraction_bound);
    put_split_columns(r, eq, req.N);
    return r;
}

// X-grid records (binomial sampling at explicit rates)

ordered_json fisher_x_record(const SweepRequest& req, double xa, double xb) {
    const BinomialFisherEquilibrium eq = binomial_fisher(req.N, xa, xb);
    ordered_json r;
    r["N"] = req.N;
    r["x_A"] = round12(xa);
    r["x_B"] = round12(xb);
    r["class"] = to_string(eq.game_class);
    r["degenerate"] = eq.game_class != GameClass::Nontrivial;
    r["conjecture"] = false;
    r["swapped"] = eq.swapped;
    r["k_star"] = int_or_null(eq.k_star);
    r["nu_star"] = num_or_null(eq.nu_star);
    r["P_star"] = num_or_null(eq.P_star);
    r["v_star"] = round12(eq.v_star);
    r["s_star"] = num_or_null(eq.s_star);
    r["prior_lo"] = eq.prior_interval ? ordered_json(round12(eq.prior_interval->first))
                                      : ordered_json(nullptr);
    r["prior_hi"] = eq.prior_interval ? ordered_json(round12(eq.prior_interval->second))
                                      : ordered_json(nullptr);
    return r;
}

ordered_json bayes_x_record(const SweepRequest& req, double xa, double xb) {
    const BettingEquilibrium eq = solve_bayes(binom_pmfs(req.N, xa, xb));
    const bool solved = eq.game_class == GameClass::Nontrivial;
    ordered_json r;
    r["N"] = req.N;
    r["x_A"] = round12(xa);
    r["x_B"] = round12(xb);
    r["class"] = to_string(eq.game_class);
    r["degenerate"] = !solved;
    r["conjecture"] = false;
    r["swapped"] = eq.swapped;
    r["P_star"] = num_or_null(eq.P_star);
    r["theta_star"] = num_or_null(eq.theta_star);
    r["delta_G"] = round12(eq.delta_G);
    r["G_over_log2"] = round12(eq.G_over_log2);
    r["err_bound"] = round12(eq.err_bound);
    r["method"] = solved ? ordered_json(to_string(eq.method_used)) : ordered_json(nullptr);
    r["iterations"] = solved ? ordered_json(eq.iterations) : ordered_json(nullptr);
    put_split_columns(r, eq, req.N);
    return r;
}

ordered_json iso_x_record(const SweepRequest& req, double xa, double xb) {
    const IsoEquilibrium eq = solve_iso(binom_pmfs(req.N, xa, xb), *req.gamma);
    ordered_json r;
    r["N"] = req.N;
    r["x_A"] = round12(xa);
    r["x_B"] = round12(xb);
    r["gamma"] = round12(eq.gamma);
    r["class"] = to_string(eq.game_class);
    r["degenerate"] = eq.game_class != GameClass::Nontrivial;
    r["conjecture"] = false;
    r["swapped"] = eq.swapped;
    r["P_star"] = num_or_null(eq.P_star);
    r["theta_star"] = num_or_null(eq.theta_star);
    r["U_star"] = round12(eq.U_star);
    r["err_bound"] = round12(eq.err_bound);
    r["contraction_bound"] = num_or_null(eq.contraction_bound);
    put_split_columns(r, eq, req.N);
    return r;
}

// Limit-table records

ordered_json fisher_policy_record(double xa, double xb) {
    ordered_json r;
    r["x_A"] = round12(xa);
    r["x_B"] = round12(xb);
    r["x0_star"] = round12(fisher_policy_limit(xa, xb));
    r["degenerate"] = false;
    r["conjecture"] = false; // the policy limit is proven
    return r;
}

ordered_json bayes_prior_record(double xa, double xb) {
    ordered_json r;
    r["x_A"] = round12(xa);
    r["x_B"] = round12(xb);
    r["P_approx"] = round12(bayes_prior_approx(xa, xb));
    r["degenerate"] = false;
    r["conjecture"] = true; // conjectured limit, numerically supported
    return r;
}

std::vector<std::string> split_column_names(std::int64_t N) {
    std::vector<std::string> names;
    for (std::int64_t k = 0; k <= N; ++k) names.push_back("split_" + std::to_string(k));
    return names;
}

std::vector<std::string> sweep_columns(const SweepRequest& req) {
    std::vector<std::string> cols;
    auto append = [&cols](std::initializer_list<const char*> names) {
        cols.insert(cols.end(), names.begin(), names.end());
    };
    switch (req.axis) {
    case SweepRequest::Axis::KGrid:
    case SweepRequest::Axis::XGrid: {
        const bool kgrid = req.axis == SweepRequest::Axis::KGrid;
        if (kgrid)
            append({"N", "K_A", "K_B", "M"});
        else
            append({"N", "x_A", "x_B"});
        if (req.kind == GameKind::Statistical) append({"gamma"});
        append({"class", "degenerate", "conjecture", "swapped"});
        if (req.kind == GameKind::Fisher) {
            append({"k_star", "nu_star", "P_star", "v_star", "s_star", "prior_lo",
                    "prior_hi"});
        } else if (req.kind == GameKind::Bayesian) {
            append({"P_star", "theta_star", "delta_G", "G_over_log2", "err_bound",
                    "method", "iterations"});
            for (const auto& s : split_column_names(req.N)) cols.push_back(s);
        } else {
            append({"P_star", "theta_star", "U_star", "err_bound", "contraction_bound"});
            for (const auto& s : split_column_names(req.N)) cols.push_back(s);
        }
        break;
    }
    case SweepRequest::Axis::FisherPolicyTable:
        append({"x_A", "x_B", "x0_star", "degenerate", "conjecture"});
        break;
    case SweepRequest::Axis::BayesPriorTable:
        append({"x_A", "x_B", "P_approx", "degenerate", "conjecture"});
        break;
    }
    return cols;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string csv_cell(const ordered_json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) return format12(v.get<double>());
    return csv_escape(v.get<std::string>());
}

ordered_json request_json(const SweepRequest& req) {
    ordered_json j;
    switch (req.axis) {
    case SweepRequest::Axis::KGrid:
        j["axis"] = "k-grid";
        j["game"] = to_string(req.kind);
        j["N"] = req.N;
        j["M"] = req.M;
        break;
    case SweepRequest::Axis::XGrid:
        j["axis"] = "x-grid";
        j["game"] = to_string(req.kind);
        j["N"] = req.N;
        j["x_step"] = round12(req.x_step);
        break;
    case SweepRequest::Axis::FisherPolicyTable:
        j["axis"] = "fisher-policy";
        break;
    case SweepRequest::Axis::BayesPriorTable:
        j["axis"] = "bayes-prior";
        break;
    }
    if (req.gamma) j["gamma"] = round12(*req.gamma);
    return j;
}

// Runs work(0..n-1) on a small pool; cell order in the output never depends
// on scheduling because each index writes its own slot.
void fill_parallel(std::size_t n, int jobs, const std::function<void(std::size_t)>& work) {
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::exception_ptr first_error;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
                next.store(n); // drain the queue so the pool winds down
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Grid values i * step rounded to the canonical print precision, open (0,1).
std::vector<double> x_grid(double step) {
    std::vector<double> xs;
    for (std::int64_t i = 1;; ++i) {
        const double x = round12(static_cast<double>(i) * step);
        if (!(x < 1.0 - 1e-9)) break;
        if (x > 0.0) xs.push_back(x);
    }
    return xs;
}

} // namespace

std::string run_sweep(const SweepRequest& req) {
    req.validate();

    std::function<ordered_json(std::size_t)> make_record;
    std::size_t n_cells = 0;

    switch (req.axis) {
    case SweepRequest::Axis::KGrid: {
        const std::size_t side = static_cast<std::size_t>(req.M) + 1;
        n_cells = side * side;
        make_record = [&req, side](std::size_t i) {
            const auto KA = static_cast<std::int64_t>(i / side);
            const auto KB = static_cast<std::int64_t>(i % side);
            if (req.kind == GameKind::Fisher) return fisher_k_record(req, KA, KB);
            if (req.kind == GameKind::Bayesian) return bayes_k_record(req, KA, KB);
            return iso_k_record(req, KA, KB);
        };
        break;
    }
    case SweepRequest::Axis::XGrid: {
        const std::vector<double> xs = x_grid(req.x_step);
        n_cells = xs.size() * xs.size();
        make_record = [&req, xs](std::size_t i) {
            const double xa = xs[i / xs.size()];
            const double xb = xs[i % xs.size()];
            if (req.kind == GameKind::Fisher) return fisher_x_record(req, xa, xb);
            if (req.kind == GameKind::Bayesian) return bayes_x_record(req, xa, xb);
            return iso_x_record(req, xa, xb);
        };
        break;
    }
    case SweepRequest::Axis::FisherPolicyTable:
    case SweepRequest::Axis::BayesPriorTable: {
        // the printed tables: x_A from 10% to 80%, x_B above it up to 90%
        std::vector<std::pair<double, double>> cells;
        for (int a = 1; a <= 8; ++a)
            for (int b = a + 1; b <= 9; ++b)
                cells.emplace_back(a / 10.0, b / 10.0);
        n_cells = cells.size();
        const bool policy = req.axis == SweepRequest::Axis::FisherPolicyTable;
        make_record = [cells, policy](std::size_t i) {
            const auto [xa, xb] = cells[i];
            return policy ? fisher_policy_record(xa, xb) : bayes_prior_record(xa, xb);
        };
        break;
    }
    }

    std::vector<ordered_json> records(n_cells);
    fill_parallel(n_cells, req.jobs, [&](std::size_t i) { records[i] = make_record(i); });

    const std::vector<std::string> columns = sweep_columns(req);
    std::ostringstream out;
    if (req.format == SweepFormat::Csv) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << csv_escape(columns[c]);
        out << "\n";
        for (const auto& r : records) {
            for (std::size_t c = 0; c < columns.size(); ++c)
                out << (c ? "," : "") << csv_cell(r.at(columns[c]));
            out << "\n";
        }
    } else {
        ordered_json doc;
        doc["command"] = "sweep";
        doc["request"] = request_json(req);
        doc["columns"] = columns;
        doc["records"] = ordered_json::array();
        for (auto& r : records) doc["records"].push_back(std::move(r));
        out << doc.dump(2) << "\n";
    }
    return out.str();
}

namespace {

// Lexicographic K-subsets of {0, ..., M-1}.
std::vector<std::vector<std::int64_t>> combinations_lex(std::int64_t M, std::int64_t K) {
    std::vector<std::vector<std::int64_t>> all;
    std::vector<std::int64_t> c(static_cast<std::size_t>(K));
    for (std::int64_t i = 0; i < K; ++i) c[static_cast<std::size_t>(i)] = i;
    for (;;) {
        all.push_back(c);
        std::int64_t i = K - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == M - (K - i)) --i;
        if (i < 0) break;
        ++c[static_cast<std::size_t>(i)];
        for (std::int64_t j = i + 1; j < K; ++j)
            c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
    return all;
}

} // namespace

std::string strategy_plot_svg(const GameSpec& spec) {
    spec.validate();
    if (spec.kind != GameKind::Fisher)
        throw InvalidSpec("strategy plots describe the win/lose game");
    const FisherEquilibrium eq = solve_fisher(spec);

    const BigInt tile_bound =
        (binomial(spec.M, spec.K_A) + binomial(spec.M, spec.K_B)) *
        binomial(spec.M, spec.N) * 2;
    if (tile_bound > BigInt(kMaxPlotTiles))
        throw TooLarge("strategy plot would exceed " + std::to_string(kMaxPlotTiles) +
                       " tiles");

    // chooser's probability of the caller's scenario A; a sure-winning game
    // is indifferent to the prior and drawn at the midpoint
    double PA = 0.5;
    if (eq.P_star) {
        PA = to_double(*eq.P_star);
        if (eq.swapped) PA = 1.0 - PA;
    }

    // guesser's policy blocks, each mapping an observed count to a guess in
    // the caller's labels
    struct PolicyBlock {
        double weight;
        std::function<bool(std::int64_t)> guess_A;
    };
    std::vector<PolicyBlock> blocks;
    const bool sw = eq.swapped;
    if (eq.game_class == GameClass::Nontrivial) {
        const std::int64_t ks = *eq.k_star;
        const double nu = to_double(*eq.nu_star);
        // in the K_A <= K_B labelling the guess is A at and below the
        // threshold (weight nu) or strictly below it (weight 1 - nu)
        if (nu > 0.0)
            blocks.push_back({nu, [ks, sw](std::int64_t k) { return sw ? k > ks : k <= ks; }});
        blocks.push_back(
            {1.0 - nu, [ks, sw](std::int64_t k) { return sw ? k >= ks : k < ks; }});
    } else if (eq.game_class == GameClass::BlindGuessing) {
        blocks.push_back({0.5, [](std::int64_t) { return true; }});
        blocks.push_back({0.5, [](std::int64_t) { return false; }});
    } else {
        const SupportInterval sa = hypergeom_pmfs(spec).support_A;
        blocks.push_back({1.0, [sa](std::int64_t k) { return sa.contains(k); }});
    }

    const auto samplings = combinations_lex(spec.M, spec.N);
    const auto seqs_A = combinations_lex(spec.M, spec.K_A);
    const auto seqs_B = combinations_lex(spec.M, spec.K_B);

    // mark masks make the overlap count a direct sum
    auto masks_of = [&](const std::vector<std::vector<std::int64_t>>& seqs) {
        std::vector<std::vector<char>> masks;
        masks.reserve(seqs.size());
        for (const auto& s : seqs) {
            std::vector<char> m(static_cast<std::size_t>(spec.M), 0);
            for (std::int64_t pos : s) m[static_cast<std::size_t>(pos)] = 1;
            masks.push_back(std::move(m));
        }
        return masks;
    };
    const auto masks_A = masks_of(seqs_A);
    const auto masks_B = masks_of(seqs_B);

    const char* kWinFill = "#2e7d32";
    const char* kLoseFill = "#c62828";

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"720\" "
           "height=\"720\" viewBox=\"0 0 1 1\" shape-rendering=\"crispEdges\">\n";
    svg << "<title>equilibrium strategy plot, game (" << spec.N << "," << spec.K_A << ","
        << spec.K_B << "," << spec.M << ")</title>\n";

    const double nS = static_cast<double>(samplings.size());
    auto emit_tiles = [&](double y, double row_h, const PolicyBlock& block,
                          const std::vector<std::vector<char>>& masks, bool is_A,
                          double x0, double col_w) {
        for (std::size_t si = 0; si < samplings.size(); ++si) {
            const double ry = y + static_cast<double>(si) * row_h;
            for (std::size_t ci = 0; ci < masks.size(); ++ci) {
                std::int64_t k = 0;
                for (std::int64_t pos : samplings[si])
                    k += masks[ci][static_cast<std::size_t>(pos)];
                const bool win = block.guess_A(k) == is_A;
                svg << "<rect x=\"" << format12(x0 + static_cast<double>(ci) * col_w)
                    << "\" y=\"" << format12(ry) << "\" width=\"" << format12(col_w)
                    << "\" height=\"" << format12(row_h) << "\" fill=\""
                    << (win ? kWinFill : kLoseFill) << "\"/>\n";
            }
        }
    };

    double y = 0.0;
    for (const auto& block : blocks) {
        const double row_h = block.weight / nS;
        if (PA > 0.0)
            emit_tiles(y, row_h, block, masks_A, true, 0.0,
                       PA / static_cast<double>(masks_A.size()));
        if (PA < 1.0)
            emit_tiles(y, row_h, block, masks_B, false, PA,
                       (1.0 - PA) / static_cast<double>(masks_B.size()));
        y += block.weight;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace statgames::cli
