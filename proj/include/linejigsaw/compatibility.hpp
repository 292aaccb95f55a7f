#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "linejigsaw/puzzle.hpp"

namespace linejigsaw {

/// Knobs of the line continuation cost. Distances are in canvas units.
struct LineMatchConfig {
    double epsilon_angle = kPi / 18.0;  // 10 degrees
    double cost_max = 1.0;
    double penalty_k = 0.5;
    std::optional<double> tau;  // fixed truncation; calibrated per table when unset
    double coherence_band = 0.02;
    double tau_multiplier = 2.0;
    double tau_floor = 1e-6;

    /// cost_max = canvas diagonal, penalty_k = cost_max / 2, coherence_band =
    /// the puzzle's contact band.
    static LineMatchConfig for_puzzle(const Puzzle& p);
};

/// Effort of continuing one line into another, both already in a common
/// frame. Smallest endpoint-to-endpoint distance when orientations agree
/// within epsilon_angle and categories match; cost_max otherwise.
double line_cost(const LineSegment& a, const LineSegment& b, const LineMatchConfig& cfg);

/// Indices of the piece's lines with an endpoint near the contact zone
/// against `other` displaced by gamma. Rasterized shapes widen the band by
/// their quantization slack.
std::vector<int> coherent_line_indices(const Piece& piece, const PieceShape& other,
                                       const RelativeStrategy& gamma, const LineMatchConfig& cfg,
                                       const ProximityConfig& prox);

/// Same selection, returning the segments in their original order.
std::vector<LineSegment> coherent_lines(const Piece& piece, const PieceShape& other,
                                        const RelativeStrategy& gamma, const LineMatchConfig& cfg,
                                        const ProximityConfig& prox);

/// Min-cost rectangular assignment; matches min(rows, cols) pairs.
/// Returns (row, col) pairs and the total cost of the selected entries.
struct LapResult {
    std::vector<std::pair<int, int>> matches;
    double cost = 0.0;
};
LapResult lap_assign(const std::vector<std::vector<double>>& cost_matrix);

/// Cost of reassembling the two pieces' coherent lines under gamma.
struct PairCost {
    double lap_cost = 0.0;
    double penalty = 0.0;
    double total = 0.0;
    std::vector<std::pair<int, int>> matches;  // indices into piece_i.lines, piece_j.lines
    int unmatched_count = 0;
    bool empty_contact = false;  // neither side had coherent lines; scores zero
};

PairCost pair_cost(const Piece& piece_i, const Piece& piece_j, const RelativeStrategy& gamma,
                   const LineMatchConfig& cfg, const ProximityConfig& prox);

/// 1 at zero cost, linearly down to 0 at tau, 0 beyond.
double compatibility_score(double c_tot, double tau);

/// tau = multiplier * median of the per-pair best costs, floored.
double calibrate_tau(std::vector<double> pair_best_costs, double multiplier, double floor);

/// One stored relative strategy of an ordered piece pair.
struct PayoffEntry {
    int dx = 0;
    int dy = 0;
    int d_rotation = 0;
    double value = 0.0;
};

/// Sparse pairwise payoffs. Overlapping poses are -1, adjacent poses carry
/// the compatibility score in (0, 1], everything else is an implicit 0.
/// Self-play (i == j) reads as -1 without storage.
class PartialPayoffTable {
public:
    PartialPayoffTable() = default;
    PartialPayoffTable(int piece_count, int rotation_count, double grid_step, int radius_cells);

    int piece_count() const { return piece_count_; }
    int rotation_count() const { return rotation_count_; }
    double grid_step() const { return grid_step_; }
    int radius_cells() const { return radius_cells_; }
    double tau() const { return tau_; }
    void set_tau(double tau) { tau_ = tau; }

    /// Entries of the ordered pair (i, j), sorted by (dx, dy, d_rotation).
    const std::vector<PayoffEntry>& entries(int i, int j) const;

    double value(int i, int j, int dx, int dy, int d_rotation) const;
    double value(int i, int j, const RelativeStrategy& gamma) const {
        return value(i, j, gamma.dx, gamma.dy, gamma.d_rotation);
    }

    /// Inserts into the ordered pair slot; call finalize() before lookups.
    void add(int i, int j, const PayoffEntry& entry);
    void finalize();

    std::size_t stored_entries() const;

    struct DumpRecord {
        int i, j, dx, dy, d_rotation;
        double value;
    };
    /// All stored records sorted by (i, j, dx, dy, d_rotation).
    std::vector<DumpRecord> dump() const;

private:
    int piece_count_ = 0;
    int rotation_count_ = 1;
    double grid_step_ = 1.0;
    int radius_cells_ = 2;
    double tau_ = 0.0;
    std::vector<std::vector<PayoffEntry>> pairs_;  // ordered pair slot i * n + j
};

/// Full table build: classify every in-radius relative strategy of every
/// pair, calibrate tau over the per-pair best costs unless fixed, score and
/// prune, then mirror each entry onto the opposite pair order.
PartialPayoffTable build_payoff_table(const std::vector<Piece>& pieces,
                                      const ProximityConfig& prox, const LineMatchConfig& cfg,
                                      int thread_count = 0);

}  // namespace linejigsaw
