#pragma once

#include "statgames/dist.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace statgames::cli {

// Outcome of one command-line invocation: what main() prints and returns.
// Kept as strings so tests can drive the full CLI without spawning processes.
struct CliResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

// Runs a full command line (subcommand plus flags, program name excluded).
// Output is a pure function of the arguments: no clock, locale, or
// environment input. Exit codes: 0 success, 1 usage or domain error,
// 2 equilibrium refuted by the certification oracle.
CliResult run(const std::vector<std::string>& args);

// Canonical float precision of all CLI output: 12 significant decimal
// digits, ties resolved by the correctly-rounded binary-to-decimal
// formatter. round12 returns the double nearest that decimal; format12
// renders it (%.12g, so trailing zeros are dropped).
double round12(double v);
std::string format12(double v);

enum class SweepFormat { Json, Csv, Svg };

// One grid-sweep request: an exact (K_A, K_B) grid at fixed N and M, a
// binomial rate grid with a float step, or one of the two built-in
// large-N limit tables. Records carry `degenerate` (game class is not
// nontrivial) and `conjecture` (value rests on an unproven limit) flags.
struct SweepRequest {
    enum class Axis { KGrid, XGrid, FisherPolicyTable, BayesPriorTable };

    Axis axis = Axis::KGrid;
    GameKind kind = GameKind::Fisher; // solver for KGrid / XGrid cells
    std::int64_t N = 0;
    std::int64_t M = 0;               // KGrid: K_A, K_B range over 0..M
    double x_step = 0.0;              // XGrid: rates step, 2*step, ... < 1
    std::optional<double> gamma;      // isoelastic sweeps only
    SweepFormat format = SweepFormat::Csv;
    int jobs = 1;

    // Throws InvalidSpec on out-of-range parameters. Svg is a valid format
    // tag for the strategy-plot command only and is rejected here.
    void validate() const;
};

// Renders the whole sweep to one JSON document or CSV table. CSV headers
// are fixed per axis/solver combination; undefined quantities are null in
// JSON and empty fields in CSV.
std::string run_sweep(const SweepRequest& req);

// Equilibrium tile diagram of a win/lose game as a standalone SVG 1.1
// document. The unit square is split P* : 1-P* horizontally into scenario
// blocks (one column per sequence, lexicographic) and by policy weight
// vertically (one row per sampling choice, lexicographic); each tile is
// filled with the win or lose color. Tile areas equal joint action
// probabilities, so the winning area equals the game value. Zero-weight
// blocks are omitted. Throws TooLarge above 2*10^5 tiles.
std::string strategy_plot_svg(const GameSpec& spec);

} // namespace statgames::cli
