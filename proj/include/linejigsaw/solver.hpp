#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "linejigsaw/compatibility.hpp"

namespace linejigsaw {

/// The shared discrete pose space: a rectangle of grid nodes crossed with
/// the rotation set. Strategy index = position index * rotation_count + rot.
struct StrategyGrid {
    Point2 origin;
    double step = 1.0;
    int width = 0;   // nodes along x
    int height = 0;  // nodes along y
    int rotation_count = 1;

    int position_count() const { return width * height; }
    int strategy_count() const { return position_count() * rotation_count; }

    Point2 position(int pos_index) const {
        return {origin.x + (pos_index % width) * step, origin.y + (pos_index / width) * step};
    }
    int position_index(int u, int v) const {
        if (u < 0 || v < 0 || u >= width || v >= height) return -1;
        return v * width + u;
    }
    int strategy_index(int pos_index, int rot) const { return pos_index * rotation_count + rot; }

    Pose pose_of(int strategy) const {
        return {position(strategy / rotation_count), strategy % rotation_count};
    }
    /// -1 when the pose is off the grid.
    int strategy_of(const Pose& pose) const;

    /// Doubled canvas extent, (2*cols-1) x (2*rows-1) nodes, so every
    /// translate of the true layout around a centered anchor fits.
    static StrategyGrid covering(int rows, int cols, double step, int rotation_count);
};

struct MixedStrategyProfile {
    int piece_count = 0;
    int strategy_count = 0;
    std::vector<double> x;  // row-major piece x strategy
    std::optional<std::pair<int, int>> anchor;  // (piece, strategy) pinned as an indicator row

    double at(int i, int h) const { return x[static_cast<size_t>(i) * strategy_count + h]; }
    double& at(int i, int h) { return x[static_cast<size_t>(i) * strategy_count + h]; }
    const double* row(int i) const { return x.data() + static_cast<size_t>(i) * strategy_count; }
    double* row(int i) { return x.data() + static_cast<size_t>(i) * strategy_count; }
};

struct SolverConfig {
    int max_iterations = 5000;
    double convergence_epsilon = 1e-6;
    double payoff_shift = 0.0;  // <= 0 selects the minimum safe value, piece_count
    double init_noise = 0.4;
    double nash_epsilon = 1e-4;
    std::uint64_t seed = 0;
    int thread_count = 0;  // 0 = hardware concurrency
    bool record_trajectory = true;
};

struct SolveReport {
    MixedStrategyProfile final_profile;
    int iterations_run = 0;
    bool converged = false;
    double nash_residual = 0.0;
    std::vector<double> payoff_trajectory;  // mean own expected payoff per iteration
    std::vector<double> change_trajectory;  // max profile entry change per iteration
};

/// Payoff matrices, piece x strategy; same layout as the profile.
using PayoffMatrix = std::vector<double>;

/// Shifted pairwise payoff of piece i playing h against piece j playing k.
/// Everything beyond the proximity radius contributes the bare shift term.
double global_payoff(int i, int h, int j, int k, const PartialPayoffTable& table,
                     const StrategyGrid& grid, double payoff_shift);

/// All expected payoffs under the profile, via the sparse table.
PayoffMatrix expected_payoffs(const MixedStrategyProfile& profile, const PartialPayoffTable& table,
                              const StrategyGrid& grid, double payoff_shift, int thread_count = 0);

/// One synchronous update: each entry is reweighted by its expected payoff
/// over the row average. Anchor rows pass through; rows renormalize.
MixedStrategyProfile replicator_step(const MixedStrategyProfile& profile,
                                     const PayoffMatrix& payoffs);

/// Interior start: near-uniform rows with multiplicative noise; the anchor
/// row, when given, is an exact indicator.
MixedStrategyProfile initialize_profile(int piece_count, const StrategyGrid& grid,
                                        std::optional<std::pair<int, int>> anchor,
                                        const SolverConfig& cfg);

/// Best-response gap of the profile: max over free pieces of
/// (best strategy payoff - own expected payoff). The anchored piece has a
/// singleton strategy set, so it contributes zero by construction.
double nash_residual(const MixedStrategyProfile& profile, const PayoffMatrix& payoffs);

/// Run the dynamics to a fixed point or the iteration cap.
SolveReport solve(const PartialPayoffTable& table, const StrategyGrid& grid,
                  std::optional<std::pair<int, int>> anchor, const SolverConfig& cfg);

}  // namespace linejigsaw
