#include "linejigsaw/pipeline.hpp"

#include <chrono>
#include <stdexcept>

namespace linejigsaw {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int pick_anchor(const Puzzle& puzzle) {
    if (puzzle.pieces.empty()) throw std::invalid_argument("empty puzzle");
    int best = 0;
    for (const Piece& p : puzzle.pieces) {
        if (p.anchor_hint() > puzzle.pieces[best].anchor_hint()) best = p.id;
    }
    return best;
}

LineMatchConfig resolve_match_config(const Puzzle& puzzle, const MatchOverrides& overrides) {
    LineMatchConfig cfg = LineMatchConfig::for_puzzle(puzzle);
    if (overrides.epsilon_angle) cfg.epsilon_angle = *overrides.epsilon_angle;
    if (overrides.cost_max) cfg.cost_max = *overrides.cost_max;
    if (overrides.penalty_k) cfg.penalty_k = *overrides.penalty_k;
    if (overrides.tau) cfg.tau = *overrides.tau;
    if (overrides.coherence_band) cfg.coherence_band = *overrides.coherence_band;
    return cfg;
}

SolveOutcome solve_puzzle(const Puzzle& puzzle, const SolveOptions& options) {
    const int n = puzzle.piece_count();
    if (n == 0) throw std::invalid_argument("empty puzzle");
    if (options.restarts < 1) throw std::invalid_argument("restarts must be >= 1");

    SolveOutcome out;
    out.match_config = resolve_match_config(puzzle, options.match);
    const ProximityConfig prox = puzzle.proximity();

    auto start = std::chrono::steady_clock::now();
    out.table = build_payoff_table(puzzle.pieces, prox, out.match_config, options.thread_count);
    out.timings.payoff_build_s = seconds_since(start);

    out.grid =
        StrategyGrid::covering(puzzle.rows(), puzzle.cols(), puzzle.grid_step, puzzle.rotation_count);
    out.anchor_piece = options.anchor_piece.value_or(pick_anchor(puzzle));
    if (out.anchor_piece < 0 || out.anchor_piece >= n) {
        throw std::invalid_argument("anchor piece out of range");
    }
    const int center = out.grid.position_index(puzzle.cols() - 1, puzzle.rows() - 1);
    out.anchor_strategy = out.grid.strategy_index(center, 0);

    start = std::chrono::steady_clock::now();
    bool have = false;
    for (int k = 0; k < options.restarts; ++k) {
        SolverConfig cfg = options.solver;
        cfg.seed = options.solver.seed + static_cast<std::uint64_t>(k);
        SolveReport report =
            solve(out.table, out.grid, std::make_pair(out.anchor_piece, out.anchor_strategy), cfg);
        out.restart_residuals.push_back(report.nash_residual);
        if (!have || report.nash_residual < out.report.nash_residual) {
            out.report = std::move(report);
            have = true;
        }
    }
    out.timings.solve_s = seconds_since(start);

    start = std::chrono::steady_clock::now();
    std::vector<PieceShape> shapes;
    shapes.reserve(n);
    for (const Piece& p : puzzle.pieces) shapes.push_back(p.shape);
    out.placement = decode(out.report.final_profile, out.grid, shapes, prox);
    out.timings.decode_s = seconds_since(start);
    return out;
}

}  // namespace linejigsaw
