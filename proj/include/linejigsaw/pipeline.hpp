#pragma once

#include <optional>
#include <vector>

#include "linejigsaw/assembly.hpp"
#include "linejigsaw/compatibility.hpp"
#include "linejigsaw/puzzle.hpp"
#include "linejigsaw/solver.hpp"

namespace linejigsaw {

/// Optional replacements for the puzzle-derived line matching defaults.
struct MatchOverrides {
    std::optional<double> epsilon_angle;  // radians
    std::optional<double> cost_max;
    std::optional<double> penalty_k;
    std::optional<double> tau;
    std::optional<double> coherence_band;
};

struct SolveOptions {
    std::optional<int> anchor_piece;  // default: the piece with most lines
    int restarts = 1;
    SolverConfig solver;
    MatchOverrides match;
    int thread_count = 0;  // payoff build workers; 0 = hardware concurrency
};

struct PhaseTimings {
    double payoff_build_s = 0.0;
    double solve_s = 0.0;
    double decode_s = 0.0;
};

struct SolveOutcome {
    StrategyGrid grid;
    PartialPayoffTable table;
    SolveReport report;
    Placement placement;
    PhaseTimings timings;
    int anchor_piece = 0;
    int anchor_strategy = 0;
    LineMatchConfig match_config;
    std::vector<double> restart_residuals;  // one per restart, in seed order
};

/// The piece holding the most line fragments; ties break to the lowest id.
int pick_anchor(const Puzzle& puzzle);

LineMatchConfig resolve_match_config(const Puzzle& puzzle, const MatchOverrides& overrides);

/// Full reconstruction: payoff table, replicator run (best residual across
/// restarts with seeds seed, seed+1, ...), then greedy decoding. The anchor
/// piece is pinned at the grid center with rotation 0.
SolveOutcome solve_puzzle(const Puzzle& puzzle, const SolveOptions& options);

}  // namespace linejigsaw
